#pragma once

#include "selinf/model.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace selinf::diversity {

// An ordered s-tuple of factor points; slot i must realize class i+1.
using Face = std::vector<FactorPoint>;

std::string face_label(const Face& face);

// Per factor point, a total map from the paired variable's outcomes onto
// classes {1,...,s}.
struct Partition {
    int s = 3;
    std::map<std::string, std::map<std::string, int>> classes;  // point label -> outcome -> class
    bool allow_empty_classes = false;
};

// Outcome at index i goes to class min(i+1, s) at every factor point.
Partition identity_partition(const SelectiveSystem& sys, int s = 3);

void validate_partition(const SelectiveSystem& sys, const Partition& partition);  // throws

// Pr[slot i's outcome falls in class i+1, for all slots]. `joint` pairs slot i
// with its i-th variable; repeated variable names are allowed (slots then share
// one draw, so differing required classes force the value to 0).
Prob diversity_value_prob(const JointPmf& joint,
                          const std::vector<std::map<std::string, int>>& slot_classes);
double diversity_value(const JointPmf& joint,
                       const std::vector<std::map<std::string, int>>& slot_classes);

struct PolyhedralSet {
    Face root;
    std::set<Face> faces;

    bool operator==(const PolyhedralSet&) const = default;
};

struct SetEnumeration {
    std::vector<PolyhedralSet> sets;
    bool truncated = false;
};

// Generates treatment-realizable polyhedral sets over `root`: depth 1 replaces
// each root slot with an admissible apex point; each further level replaces
// one face with the apex-substituted faces over it. Face sets are deduplicated.
SetEnumeration enumerate_polyhedral_sets(const Face& root, const std::vector<Treatment>& treatments,
                                         int depth);

// The face's value under the system's distributions: evaluated at every
// treatment covering the face's points, agreement-checked within tol, averaged
// (exactness kept when unambiguous).
Prob face_value(const SelectiveSystem& sys, const Face& face, const Partition& partition,
                double tol = kEpsProb);

struct DiversityViolation {
    PolyhedralSet set;
    Prob lhs;
    Prob rhs;
};

struct DiversityReport {
    std::vector<DiversityViolation> violations;
    bool truncated = false;
};

DiversityReport diversity_test(const SelectiveSystem& sys, const Partition& partition,
                               int depth = 2, double slack = 1e-10);

}  // namespace selinf::diversity
