#pragma once

#include <optional>
#include <string_view>

namespace isotree {

// Published values of the constants with the agreement we require.
struct ReferenceValue {
  std::string_view name;
  double value;
  double tolerance;
};

inline constexpr ReferenceValue kRefLabeledA{"A", 2.397678, 1e-4};
inline constexpr ReferenceValue kRefLabeledCl{"c_l", 0.354379, 1e-5};
inline constexpr ReferenceValue kRefUbDelta{"delta", 0.412681, 1e-5};
inline constexpr ReferenceValue kRefUbC{"C", 1.279101, 1e-4};
inline constexpr ReferenceValue kRefLeafMu{"leaf_mu", 0.340252, 1e-4};
inline constexpr ReferenceValue kRefLeafBaseline{"leaf_mu_tree_function", 0.36787944117144233, 1e-6};
inline constexpr ReferenceValue kRefBinaryMu{"mu", 0.444518, 1e-4};
inline constexpr ReferenceValue kRefBinarySigma2{"sigma2", 0.072413, 1e-3};
inline constexpr ReferenceValue kRefUbMu{"mu", 0.176278, 1e-4};
inline constexpr ReferenceValue kRefUbSigma2{"sigma2", 0.025865, 1e-3};
inline constexpr ReferenceValue kRefAutMu{"mu", 0.137342, 1e-3};
inline constexpr ReferenceValue kRefAutSigma2{"sigma2", 0.196770, 1e-3};

}  // namespace isotree
