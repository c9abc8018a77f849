#pragma once

#include <utility>
#include <vector>

#include "eai/nn.hpp"
#include "eai/skeleton.hpp"
#include "eai/tensor.hpp"

namespace eai {

// Learnable mixing weight constrained to (0.5, 1) by 0.5 + 0.5 * sigmoid(raw).
struct MixFactor {
    Tensor raw;  // 1x1

    static MixFactor create(ParameterStore& store, const std::string& name);
    Tensor value() const;
    double effective() const;
};

// Part features after circular cross neutralization.
using AlignedFeatures = PerPart<Tensor>;

inline constexpr double kNeutralizeEpsilon = 1e-5;

// Normalizes each part with statistics fused from both parts:
//   mu_ab = a*mu_a + (1-a)*mu_b, var_ab = a*var_a + (1-a)*var_b
//   s'_a  = (s_a - mu_ab) / sqrt(eps + var_ab)
// and symmetrically for b. Statistics are per column over the rows
// (population variance). `alpha` is a 1x1 tensor.
std::pair<Tensor, Tensor> cross_neutralize(const Tensor& a, const Tensor& b, const Tensor& alpha,
                                           double eps = kNeutralizeEpsilon);

// (S'_l, S'_m) = CN(S_l, S_m, alpha); (~S_m, S'_r) = CN(S'_m, S_r, beta);
// (~S_r, ~S_l) = CN(S'_r, S'_l, gamma).
AlignedFeatures circular_align(const PerPart<Tensor>& intra, const Tensor& alpha, const Tensor& beta,
                               const Tensor& gamma, double eps = kNeutralizeEpsilon);

// Biased (V-statistic) squared MMD with a Gaussian kernel
// k(u, v) = exp(-|u - v|^2 / h), where h is the median pairwise squared
// distance over the pooled rows (1 when that median is 0). Clamped at 0.
Tensor mmd(const Tensor& x, const Tensor& y);

// Sum of pairwise MMD between the per-sample spatial means of the three
// parts across a batch: MMD(l, m) + MMD(m, r) + MMD(r, l).
Tensor alignment_loss(const std::vector<AlignedFeatures>& batch);

}  // namespace eai
