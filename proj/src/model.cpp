#include "selinf/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace selinf {

Prob Prob::from_text(const std::string& text) {
    auto r = parse_rational(text);
    if (!r) throw std::invalid_argument("unparseable probability: \"" + text + "\"");
    Prob p = from_rational(*r);
    p.text = text;
    return p;
}

Prob operator+(const Prob& a, const Prob& b) {
    Prob r;
    r.value = a.value + b.value;
    if (a.exact && b.exact) r.exact = *a.exact + *b.exact;
    return r;
}

std::string point_label(const FactorPoint& p) { return p.factor + "=" + p.level; }

std::string treatment_label(const Treatment& t) {
    std::string s;
    for (const auto& [f, l] : t) {
        if (!s.empty()) s += ";";
        s += f + "=" + l;
    }
    return s;
}

const Prob& JointPmf::at(const std::vector<std::string>& key) const {
    static const Prob zero{};
    auto it = table.find(key);
    return it == table.end() ? zero : it->second;
}

int find_factor(const SelectiveSystem& sys, const std::string& name) {
    for (std::size_t i = 0; i < sys.factors.size(); ++i)
        if (sys.factors[i].name == name) return static_cast<int>(i);
    return -1;
}

int find_variable(const SelectiveSystem& sys, const std::string& name) {
    for (std::size_t i = 0; i < sys.variables.size(); ++i)
        if (sys.variables[i].name == name) return static_cast<int>(i);
    return -1;
}

bool treatment_contains(const Treatment& t, const FactorPoint& p) {
    auto it = t.find(p.factor);
    return it != t.end() && it->second == p.level;
}

std::vector<Treatment> treatments_containing(const SelectiveSystem& sys,
                                             const std::vector<FactorPoint>& points) {
    std::vector<Treatment> out;
    for (const auto& t : sys.treatments) {
        bool all = true;
        for (const auto& p : points)
            if (!treatment_contains(t, p)) { all = false; break; }
        if (all) out.push_back(t);
    }
    return out;
}

std::vector<FactorPoint> all_factor_points(const SelectiveSystem& sys) {
    std::vector<FactorPoint> out;
    for (const auto& f : sys.factors)
        for (const auto& l : f.levels) out.push_back({f.name, l});
    return out;
}

Odometer::Odometer(std::vector<std::size_t> radices)
    : radices_(std::move(radices)), digits_(radices_.size(), 0) {
    for (auto r : radices_)
        if (r == 0) done_ = true;
}

void Odometer::next() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
        if (++digits_[i] < radices_[i]) return;
        digits_[i] = 0;
    }
    done_ = true;
}

std::size_t Odometer::count() const {
    std::size_t n = 1;
    for (auto r : radices_) n *= r;
    return n;
}

JointPmf dense_pmf(const std::vector<Variable>& variables, const std::vector<Prob>& probs) {
    std::vector<std::size_t> radices;
    for (const auto& v : variables) radices.push_back(v.outcomes.size());
    JointPmf pmf;
    for (const auto& v : variables) pmf.variables.push_back(v.name);

    Odometer od(radices);
    std::size_t i = 0;
    for (; !od.done(); od.next(), ++i) {
        if (i >= probs.size()) throw std::invalid_argument("dense_pmf: too few probabilities");
        std::vector<std::string> key(variables.size());
        for (std::size_t k = 0; k < variables.size(); ++k)
            key[k] = variables[k].outcomes[od.digits()[k]];
        pmf.table[key] = probs[i];
    }
    if (i != probs.size()) throw std::invalid_argument("dense_pmf: too many probabilities");
    return pmf;
}

Treatment make_treatment(const std::vector<Factor>& factors,
                         const std::vector<std::string>& levels) {
    if (factors.size() != levels.size())
        throw std::invalid_argument("make_treatment: arity mismatch");
    Treatment t;
    for (std::size_t i = 0; i < factors.size(); ++i) t[factors[i].name] = levels[i];
    return t;
}

namespace {

template <class... Args>
std::string cat(Args&&... args) {
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}

bool unique_strings(const std::vector<std::string>& v) {
    std::set<std::string> s(v.begin(), v.end());
    return s.size() == v.size();
}

}  // namespace

std::vector<ValidationError> validate_system(const SelectiveSystem& sys, double eps_prob) {
    std::vector<ValidationError> errs;
    auto err = [&](std::string where, std::string msg) {
        errs.push_back({std::move(where), std::move(msg)});
    };

    if (sys.factors.empty()) err("factors", "no factors");
    if (sys.variables.size() != sys.factors.size())
        err("variables", cat("bijective pairing broken: ", sys.variables.size(), " variables vs ",
                             sys.factors.size(), " factors"));

    std::set<std::string> fnames, vnames;
    for (const auto& f : sys.factors) {
        if (!fnames.insert(f.name).second) err("factor " + f.name, "duplicate factor name");
        if (f.levels.empty()) err("factor " + f.name, "no levels");
        if (!unique_strings(f.levels)) err("factor " + f.name, "duplicate level labels");
    }
    for (const auto& v : sys.variables) {
        if (!vnames.insert(v.name).second) err("variable " + v.name, "duplicate variable name");
        if (v.outcomes.empty()) err("variable " + v.name, "no outcomes");
        if (!unique_strings(v.outcomes)) err("variable " + v.name, "duplicate outcome labels");
        if (v.numeric_values && v.numeric_values->size() != v.outcomes.size())
            err("variable " + v.name, "numeric_values length differs from outcomes");
    }
    if (!errs.empty()) return errs;  // structural problems make the rest unreadable

    if (sys.treatments.empty()) err("treatments", "no treatments");
    std::set<Treatment> seen;
    for (const auto& t : sys.treatments) {
        if (!seen.insert(t).second) {
            err("treatment " + treatment_label(t), "duplicate treatment");
            continue;
        }
        for (const auto& f : sys.factors) {
            auto it = t.find(f.name);
            if (it == t.end()) {
                err("treatment " + treatment_label(t), "missing factor " + f.name);
            } else if (std::find(f.levels.begin(), f.levels.end(), it->second) == f.levels.end()) {
                err("treatment " + treatment_label(t),
                    cat("unknown level \"", it->second, "\" of factor ", f.name));
            }
        }
        for (const auto& [fname, _] : t)
            if (!fnames.count(fname))
                err("treatment " + treatment_label(t), "unknown factor " + fname);
    }

    for (const auto& t : sys.treatments)
        if (!sys.distributions.count(t))
            err("treatment " + treatment_label(t), "no distribution");
    for (const auto& [t, _] : sys.distributions)
        if (!seen.count(t))
            err("distribution " + treatment_label(t), "treatment not in treatment set");

    std::vector<std::string> order;
    for (const auto& v : sys.variables) order.push_back(v.name);
    for (const auto& [t, pmf] : sys.distributions) {
        std::string where = "distribution " + treatment_label(t);
        if (pmf.variables != order) {
            err(where, "variable order differs from the system's variable list");
            continue;
        }
        double sum = 0.0;
        for (const auto& [key, p] : pmf.table) {
            if (key.size() != sys.variables.size()) {
                err(where, "outcome tuple of wrong arity");
                continue;
            }
            for (std::size_t i = 0; i < key.size(); ++i) {
                const auto& outs = sys.variables[i].outcomes;
                if (std::find(outs.begin(), outs.end(), key[i]) == outs.end())
                    err(where, cat("unknown outcome \"", key[i], "\" of variable ",
                                   sys.variables[i].name));
            }
            if (p.value < -eps_prob || p.value > 1.0 + eps_prob)
                err(where, cat("probability ", p.value, " outside [0,1]"));
            sum += p.value;
        }
        if (std::abs(sum - 1.0) > eps_prob)
            err(where, cat("pmf not normalized: sums to ", sum));
    }
    return errs;
}

void require_valid(const SelectiveSystem& sys, double eps_prob) {
    auto errs = validate_system(sys, eps_prob);
    if (errs.empty()) return;
    std::string msg = "invalid system:";
    for (const auto& e : errs) msg += "\n  [" + e.where + "] " + e.message;
    throw std::invalid_argument(msg);
}

SelectiveSystem canonical_rearrangement(const std::vector<Factor>& factors,
                                        const std::vector<Variable>& variables,
                                        const Diagram& diagram,
                                        const std::vector<Treatment>& treatments,
                                        const std::map<Treatment, JointPmf>& distributions) {
    std::map<std::string, const Factor*> by_name;
    for (const auto& f : factors) by_name[f.name] = &f;

    if (diagram.size() != variables.size())
        throw std::invalid_argument("canonical_rearrangement: diagram must cover every variable exactly once");
    for (const auto& v : variables) {
        auto it = diagram.find(v.name);
        if (it == diagram.end())
            throw std::invalid_argument("canonical_rearrangement: variable " + v.name + " missing from diagram");
        for (const auto& f : it->second)
            if (!by_name.count(f))
                throw std::invalid_argument("canonical_rearrangement: unknown factor " + f +
                                            " in influences of " + v.name);
    }
    for (const auto& t : treatments) {
        for (const auto& f : factors)
            if (!t.count(f.name))
                throw std::invalid_argument("canonical_rearrangement: treatment " + treatment_label(t) +
                                            " missing factor " + f.name);
        if (!distributions.count(t))
            throw std::invalid_argument("canonical_rearrangement: treatment " + treatment_label(t) +
                                        " has no distribution");
    }

    // Compound point for one variable under one treatment: the subtreatment
    // over its influencing factors, rendered as sorted "factor=level" pairs.
    auto compound = [&](const Treatment& t, const std::set<std::string>& infl) -> std::string {
        if (infl.empty()) return "∅";
        std::string s;
        for (const auto& f : infl) {  // std::set iterates sorted
            if (!s.empty()) s += ";";
            s += f + "=" + t.at(f);
        }
        return s;
    };

    SelectiveSystem out;
    out.variables = variables;
    for (const auto& v : variables) {
        const auto& infl = diagram.at(v.name);
        std::set<std::string> labels;
        for (const auto& t : treatments) labels.insert(compound(t, infl));
        Factor nf;
        nf.name = v.name + "*";
        nf.levels.assign(labels.begin(), labels.end());
        out.factors.push_back(std::move(nf));
    }

    for (const auto& t : treatments) {
        Treatment nt;
        for (std::size_t i = 0; i < variables.size(); ++i)
            nt[out.factors[i].name] = compound(t, diagram.at(variables[i].name));
        const JointPmf& pmf = distributions.at(t);
        auto it = out.distributions.find(nt);
        if (it == out.distributions.end()) {
            out.treatments.push_back(nt);
            out.distributions.emplace(std::move(nt), pmf);
        } else if (!(it->second == pmf)) {
            // Two original treatments collapse onto the same compound
            // treatment only when some factor influences nothing; that is
            // harmless if their tables agree and ambiguous otherwise.
            throw std::invalid_argument(
                "canonical_rearrangement: treatments collapsing to " + treatment_label(it->first) +
                " carry different distributions");
        }
    }
    std::sort(out.treatments.begin(), out.treatments.end());
    return out;
}

JointPmf marginal(const JointPmf& pmf, const std::vector<std::string>& subset) {
    if (subset.empty()) throw std::invalid_argument("marginal: empty subset");
    if (!unique_strings(subset)) throw std::invalid_argument("marginal: duplicate variable in subset");
    std::vector<std::size_t> pos;
    for (const auto& name : subset) {
        auto it = std::find(pmf.variables.begin(), pmf.variables.end(), name);
        if (it == pmf.variables.end()) throw std::invalid_argument("marginal: unknown variable " + name);
        pos.push_back(static_cast<std::size_t>(it - pmf.variables.begin()));
    }

    JointPmf out;
    out.variables = subset;
    for (const auto& [key, p] : pmf.table) {
        std::vector<std::string> sub(pos.size());
        for (std::size_t k = 0; k < pos.size(); ++k) sub[k] = key[pos[k]];
        auto it = out.table.find(sub);
        if (it == out.table.end())
            out.table.emplace(std::move(sub), p);
        else
            it->second = it->second + p;
    }
    return out;
}

namespace {

// Largest entrywise difference over the union of the two tables' keys,
// exact when both sides carry exact values.
double table_discrepancy(const JointPmf& a, const JointPmf& b) {
    double worst = 0.0;
    auto visit = [&](const std::vector<std::string>& key) {
        const Prob& pa = a.at(key);
        const Prob& pb = b.at(key);
        double d;
        if (pa.exact && pb.exact)
            d = std::abs(to_double(*pa.exact - *pb.exact));
        else
            d = std::abs(pa.value - pb.value);
        worst = std::max(worst, d);
    };
    for (const auto& [key, _] : a.table) visit(key);
    for (const auto& [key, _] : b.table)
        if (!a.table.count(key)) visit(key);
    return worst;
}

}  // namespace

MarginalSelectivityReport check_marginal_selectivity(const SelectiveSystem& sys, double tol,
                                                     std::size_t max_subset_size) {
    require_valid(sys);
    const std::size_t n = sys.variables.size();
    MarginalSelectivityReport report;
    report.capped = max_subset_size > 0 && max_subset_size < n;

    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::string> vars;
        std::vector<std::string> factors_of;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) {
                vars.push_back(sys.variables[i].name);
                factors_of.push_back(sys.factors[i].name);
            }
        if (max_subset_size > 0 && vars.size() > max_subset_size) continue;

        // Group treatments by their restriction to the subset's factors.
        std::map<std::vector<std::string>, std::vector<const Treatment*>> groups;
        for (const auto& t : sys.treatments) {
            std::vector<std::string> key;
            for (const auto& f : factors_of) key.push_back(t.at(f));
            groups[key].push_back(&t);
        }

        for (const auto& [_, group] : groups) {
            if (group.size() < 2) continue;
            std::vector<JointPmf> margins;
            for (const auto* t : group)
                margins.push_back(marginal(sys.distributions.at(*t), vars));
            for (std::size_t i = 0; i < group.size(); ++i)
                for (std::size_t j = i + 1; j < group.size(); ++j) {
                    double d = table_discrepancy(margins[i], margins[j]);
                    report.worst_discrepancy = std::max(report.worst_discrepancy, d);
                    if (d > tol)
                        report.violations.push_back(
                            {vars, *group[i], *group[j], margins[i], margins[j], d});
                }
        }
    }
    report.satisfied = report.worst_discrepancy <= tol;
    return report;
}

SelectiveSystem apply_point_transform(
    const SelectiveSystem& sys,
    const std::map<FactorPoint, std::map<std::string, std::string>>& relabel) {
    require_valid(sys);
    for (const auto& [point, map] : relabel) {
        int fi = find_factor(sys, point.factor);
        if (fi < 0) throw std::invalid_argument("apply_point_transform: unknown factor " + point.factor);
        const auto& levels = sys.factors[fi].levels;
        if (std::find(levels.begin(), levels.end(), point.level) == levels.end())
            throw std::invalid_argument("apply_point_transform: unknown point " + point_label(point));
        const auto& outs = sys.variables[fi].outcomes;
        std::set<std::string> image;
        for (const auto& o : outs) {
            auto it = map.find(o);
            if (it == map.end())
                throw std::invalid_argument("apply_point_transform: map at " + point_label(point) +
                                            " misses outcome \"" + o + "\"");
            image.insert(it->second);
        }
        if (image != std::set<std::string>(outs.begin(), outs.end()))
            throw std::invalid_argument("apply_point_transform: map at " + point_label(point) +
                                        " is not a permutation of the outcomes");
    }

    SelectiveSystem out = sys;
    for (auto& [t, pmf] : out.distributions) {
        std::map<std::vector<std::string>, Prob> table;
        for (const auto& [key, p] : pmf.table) {
            std::vector<std::string> nk = key;
            for (std::size_t i = 0; i < key.size(); ++i) {
                FactorPoint selected{sys.factors[i].name, t.at(sys.factors[i].name)};
                auto it = relabel.find(selected);
                if (it != relabel.end()) nk[i] = it->second.at(key[i]);
            }
            auto ins = table.emplace(std::move(nk), p);
            if (!ins.second) ins.first->second = ins.first->second + p;
        }
        pmf.table = std::move(table);
    }
    return out;
}

}  // namespace selinf
