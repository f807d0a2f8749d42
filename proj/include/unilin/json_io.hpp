#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "unilin/constants.hpp"
#include "unilin/measure.hpp"
#include "unilin/subgroups.hpp"

namespace unilin {

using json = nlohmann::ordered_json;

// Rationals travel as strings ("3/4"); numbers and decimal or exponent literals are accepted on input.
json to_json(const Q& x);
json to_json(const Z& x);
json to_json(const Vec& v);
json to_json(const Mat& m);
json to_json(const ExteriorVector& w);
json real_json(long double x);  // non-finite values become "inf", "-inf" or "nan"

Q q_from(const json& j);
Z z_from(const json& j);
Vec vec_from(const json& j);
Mat mat_from(const json& j);
std::vector<Q> q_list(const json& j);

json constants_json(const ConstantsProfile& k);
// Applies the keys present in `j` on top of `base`; unknown keys are rejected.
ConstantsProfile constants_from(const json& j, ConstantsProfile base = {});

// Algebras as lists of matrices.
json algebra_json(const MatrixLieAlgebra& a);
MatrixLieAlgebra algebra_from(const json& j, int n);

// {"basis": [matrices], "name": ...} or {"preset": "upper" | "lower" | "diagonal" | "borel" | "sl", "n": N}.
SubgroupDescriptor subgroup_from(const json& j, const MatrixLieAlgebra& ambient);
json subgroup_json(const SubgroupDescriptor& h);

// {"kind": "lebesgue" | "cantor" | "digit" | "table", ...}
FriendlyMeasure measure_from(const json& j);
json measure_json(const FriendlyMeasure& mu);

// {"kind": "sigma" | "parametric" | "table", "table": [[s, eps], ...]}
EpsilonProfile epsilon_from(const json& j, const ConstantsProfile& k, const Q& eta,
                            const std::vector<SubgroupDescriptor>& catalog, const UnipotentDirection& u);

}  // namespace unilin
