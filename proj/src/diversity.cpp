#include "selinf/diversity.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace selinf::diversity {

std::string face_label(const Face& face) {
    std::ostringstream os;
    for (std::size_t i = 0; i < face.size(); ++i) os << (i ? " " : "") << point_label(face[i]);
    return os.str();
}

Partition identity_partition(const SelectiveSystem& sys, int s) {
    if (sys.factors.size() != sys.variables.size())
        throw std::invalid_argument(
            "identity_partition: system is not in bijective form (apply canonical rearrangement)");
    Partition p;
    p.s = s;
    for (std::size_t i = 0; i < sys.factors.size(); ++i)
        for (const auto& level : sys.factors[i].levels) {
            std::map<std::string, int>& m =
                p.classes[point_label({sys.factors[i].name, level})];
            const auto& outcomes = sys.variables[i].outcomes;
            for (std::size_t k = 0; k < outcomes.size(); ++k)
                m[outcomes[k]] = std::min(static_cast<int>(k) + 1, s);
        }
    return p;
}

void validate_partition(const SelectiveSystem& sys, const Partition& partition) {
    if (partition.s < 2) throw std::invalid_argument("partition: s must be >= 2");
    if (sys.factors.size() != sys.variables.size())
        throw std::invalid_argument("partition: system is not in bijective form");
    for (std::size_t i = 0; i < sys.factors.size(); ++i)
        for (const auto& level : sys.factors[i].levels) {
            std::string label = point_label({sys.factors[i].name, level});
            auto it = partition.classes.find(label);
            if (it == partition.classes.end())
                throw std::invalid_argument("partition: no class map for point " + label);
            const auto& m = it->second;
            const auto& outcomes = sys.variables[i].outcomes;
            if (m.size() != outcomes.size())
                throw std::invalid_argument("partition: class map for " + label +
                                            " does not cover the variable's outcomes");
            std::vector<bool> hit(static_cast<std::size_t>(partition.s), false);
            for (const auto& o : outcomes) {
                auto c = m.find(o);
                if (c == m.end())
                    throw std::invalid_argument("partition: outcome \"" + o +
                                                "\" unmapped at point " + label);
                if (c->second < 1 || c->second > partition.s)
                    throw std::invalid_argument("partition: class out of range at point " + label);
                hit[static_cast<std::size_t>(c->second - 1)] = true;
            }
            if (!partition.allow_empty_classes)
                for (std::size_t k = 0; k < hit.size(); ++k)
                    if (!hit[k])
                        throw std::invalid_argument("partition: class " + std::to_string(k + 1) +
                                                    " is empty at point " + label);
        }
}

Prob diversity_value_prob(const JointPmf& joint,
                          const std::vector<std::map<std::string, int>>& slot_classes) {
    if (joint.variables.size() != slot_classes.size())
        throw std::invalid_argument("diversity_value: arity mismatch");
    Prob acc = Prob::from_rational(Rational(0));
    for (const auto& [key, p] : joint.table) {
        bool match = true;
        for (std::size_t i = 0; i < slot_classes.size() && match; ++i) {
            auto it = slot_classes[i].find(key[i]);
            if (it == slot_classes[i].end())
                throw std::invalid_argument("diversity_value: outcome \"" + key[i] +
                                            "\" not mapped in slot " + std::to_string(i + 1));
            match = it->second == static_cast<int>(i) + 1;
        }
        if (match) acc = acc + p;
    }
    return acc;
}

double diversity_value(const JointPmf& joint,
                       const std::vector<std::map<std::string, int>>& slot_classes) {
    return diversity_value_prob(joint, slot_classes).value;
}

namespace {

bool face_realizable(const Face& face, const std::vector<Treatment>& treatments) {
    for (const auto& t : treatments) {
        bool ok = true;
        for (const auto& p : face)
            if (!treatment_contains(t, p)) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

std::vector<FactorPoint> points_in_treatments(const std::vector<Treatment>& treatments) {
    std::set<FactorPoint> seen;
    for (const auto& t : treatments)
        for (const auto& [f, l] : t) seen.insert({f, l});
    return {seen.begin(), seen.end()};
}

bool point_in_face(const Face& face, const FactorPoint& p) {
    return std::find(face.begin(), face.end(), p) != face.end();
}

// Rule 1 over `base`: the apex replaces each slot in turn. Faces here are
// formal tuples; substituting next to a same-factor point is allowed (the
// inequality holds in the hypothetical joint vector), and realizability is
// only required of the sets that are finally evaluated.
std::set<Face> substituted_faces(const Face& base, const FactorPoint& apex) {
    std::set<Face> faces;
    for (std::size_t k = 0; k < base.size(); ++k) {
        Face f = base;
        f[k] = apex;
        faces.insert(std::move(f));
    }
    return faces;
}

bool set_realizable(const std::set<Face>& faces, const std::vector<Treatment>& treatments) {
    for (const auto& f : faces)
        if (!face_realizable(f, treatments)) return false;
    return true;
}

}  // namespace

SetEnumeration enumerate_polyhedral_sets(const Face& root, const std::vector<Treatment>& treatments,
                                         int depth) {
    if (root.size() < 2) throw std::invalid_argument("polyhedral root must have at least 2 points");
    for (std::size_t i = 0; i < root.size(); ++i)
        for (std::size_t j = i + 1; j < root.size(); ++j)
            if (root[i].factor == root[j].factor)
                throw std::invalid_argument("polyhedral root repeats factor " + root[i].factor);
    if (depth < 1) throw std::invalid_argument("enumerate_polyhedral_sets: depth must be >= 1");
    if (!face_realizable(root, treatments))
        throw std::invalid_argument("polyhedral root " + face_label(root) +
                                    " is not treatment-realizable");

    std::vector<FactorPoint> points = points_in_treatments(treatments);

    // Apexes already in the face only add zero-valued degenerate faces, so
    // skipping them loses no violations.
    auto apexes_for = [&](const Face& base) {
        std::vector<FactorPoint> out;
        for (const auto& p : points)
            if (!point_in_face(base, p)) out.push_back(p);
        return out;
    };

    SetEnumeration result;
    std::set<std::set<Face>> seen;
    std::vector<std::set<Face>> level;

    for (const auto& apex : apexes_for(root)) {
        std::set<Face> faces = substituted_faces(root, apex);
        if (faces.count(root)) continue;
        if (seen.insert(faces).second) level.push_back(std::move(faces));
    }

    for (int d = 1; d <= depth; ++d) {
        for (const auto& faces : level)
            if (set_realizable(faces, treatments)) result.sets.push_back(PolyhedralSet{root, faces});
        std::vector<std::set<Face>> next;
        for (const auto& faces : level)
            for (const auto& f : faces)
                for (const auto& apex : apexes_for(f)) {
                    std::set<Face> grown = faces;
                    grown.erase(f);
                    auto sub = substituted_faces(f, apex);
                    grown.insert(sub.begin(), sub.end());
                    if (grown.count(root)) continue;
                    if (seen.insert(grown).second) next.push_back(std::move(grown));
                }
        if (d == depth) {
            result.truncated = !next.empty();
            break;
        }
        level = std::move(next);
    }
    return result;
}

Prob face_value(const SelectiveSystem& sys, const Face& face, const Partition& partition,
                double tol) {
    if (sys.factors.size() != sys.variables.size())
        throw std::invalid_argument("face_value: system is not in bijective form");

    std::vector<std::map<std::string, int>> slot_classes;
    std::vector<std::string> slot_vars;
    for (const auto& p : face) {
        int fi = find_factor(sys, p.factor);
        if (fi < 0) throw std::invalid_argument("face_value: unknown factor " + p.factor);
        slot_vars.push_back(sys.variables[static_cast<std::size_t>(fi)].name);
        auto it = partition.classes.find(point_label(p));
        if (it == partition.classes.end())
            throw std::invalid_argument("face_value: partition has no class map for " +
                                        point_label(p));
        slot_classes.push_back(it->second);
    }

    std::vector<std::string> distinct_vars;
    std::vector<std::size_t> slot_to_distinct;
    for (const auto& v : slot_vars) {
        auto it = std::find(distinct_vars.begin(), distinct_vars.end(), v);
        if (it == distinct_vars.end()) {
            slot_to_distinct.push_back(distinct_vars.size());
            distinct_vars.push_back(v);
        } else {
            slot_to_distinct.push_back(static_cast<std::size_t>(it - distinct_vars.begin()));
        }
    }

    std::vector<Prob> values;
    for (const auto& t : sys.treatments) {
        bool covers = true;
        for (const auto& p : face)
            if (!treatment_contains(t, p)) {
                covers = false;
                break;
            }
        if (!covers) continue;
        JointPmf marg = marginal(sys.distributions.at(t), distinct_vars);
        JointPmf expanded;
        expanded.variables = slot_vars;
        for (const auto& [key, p] : marg.table) {
            std::vector<std::string> slot_key(face.size());
            for (std::size_t i = 0; i < face.size(); ++i) slot_key[i] = key[slot_to_distinct[i]];
            expanded.table[slot_key] = p;
        }
        values.push_back(diversity_value_prob(expanded, slot_classes));
    }
    if (values.empty())
        throw std::invalid_argument("face_value: face {" + face_label(face) +
                                    "} is contained in no treatment");

    for (std::size_t i = 1; i < values.size(); ++i)
        if (std::abs(values[i].value - values[0].value) > tol) {
            std::ostringstream os;
            os << "marginal selectivity violated for face {" << face_label(face)
               << "}: values " << values[0].value << " vs " << values[i].value;
            throw std::runtime_error(os.str());
        }

    bool all_exact = true;
    for (const auto& v : values)
        if (!v.exact) all_exact = false;
    Prob mean;
    if (all_exact) {
        Rational sum(0);
        for (const auto& v : values) sum += *v.exact;
        mean = Prob::from_rational(sum / static_cast<int>(values.size()));
    } else {
        double sum = 0.0;
        for (const auto& v : values) sum += v.value;
        mean = Prob::from_double(sum / static_cast<double>(values.size()));
    }
    return mean;
}

DiversityReport diversity_test(const SelectiveSystem& sys, const Partition& partition, int depth,
                               double slack) {
    require_valid(sys);
    validate_partition(sys, partition);
    if (partition.s != 3)
        throw std::invalid_argument("diversity_test: only s = 3 is supported");

    std::set<Face> roots;
    for (const auto& t : sys.treatments) {
        std::vector<FactorPoint> pts;
        for (const auto& [f, l] : t) pts.push_back({f, l});
        std::size_t n = pts.size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) {
                    if (a == b || b == c || a == c) continue;
                    roots.insert(Face{pts[a], pts[b], pts[c]});
                }
    }

    std::map<Face, Prob> cache;
    auto value = [&](const Face& f) {
        auto it = cache.find(f);
        if (it != cache.end()) return it->second;
        Prob v = face_value(sys, f, partition);
        cache.emplace(f, v);
        return v;
    };

    DiversityReport report;
    for (const Face& root : roots) {
        SetEnumeration sets = enumerate_polyhedral_sets(root, sys.treatments, depth);
        report.truncated = report.truncated || sets.truncated;
        Prob lhs = value(root);
        for (const auto& set : sets.sets) {
            Prob rhs = Prob::from_rational(Rational(0));
            for (const auto& f : set.faces) rhs = rhs + value(f);
            if (lhs.value > rhs.value + slack)
                report.violations.push_back(DiversityViolation{set, lhs, rhs});
        }
    }
    return report;
}

}  // namespace selinf::diversity
