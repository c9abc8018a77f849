#include "eai/xca.hpp"

#include "eai/error.hpp"
#include "eai/ops.hpp"

namespace eai {

MixFactor MixFactor::create(ParameterStore& store, const std::string& name) {
    return {store.add(name, Tensor::scalar(0.0))};
}

Tensor MixFactor::value() const { return add_scalar(scale(sigmoid(raw), 0.5), 0.5); }

double MixFactor::effective() const {
    NoGradGuard guard;
    return value().item();
}

std::pair<Tensor, Tensor> cross_neutralize(const Tensor& a, const Tensor& b, const Tensor& alpha, double eps) {
    if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.cols()) {
        throw ShapeMismatch("cross_neutralize: feature widths differ");
    }
    if (a.rows() < 2 || b.rows() < 2) throw DegenerateInput("cross_neutralize: each part needs at least 2 rows");
    if (alpha.numel() != 1) throw ShapeMismatch("cross_neutralize: alpha must be a scalar");

    const MeanVar sa = mean_var_rows(a);
    const MeanVar sb = mean_var_rows(b);
    const Tensor rest = add_scalar(neg(alpha), 1.0);
    auto fuse = [&](const Tensor& own, const Tensor& other) { return add(mul(alpha, own), mul(rest, other)); };

    const Tensor mu_ab = fuse(sa.mean, sb.mean);
    const Tensor mu_ba = fuse(sb.mean, sa.mean);
    const Tensor var_ab = fuse(sa.var, sb.var);
    const Tensor var_ba = fuse(sb.var, sa.var);

    Tensor out_a = div(sub(a, mu_ab), eai::sqrt(add_scalar(var_ab, eps)));
    Tensor out_b = div(sub(b, mu_ba), eai::sqrt(add_scalar(var_ba, eps)));
    return {out_a, out_b};
}

AlignedFeatures circular_align(const PerPart<Tensor>& intra, const Tensor& alpha, const Tensor& beta,
                               const Tensor& gamma, double eps) {
    auto [l1, m1] = cross_neutralize(intra.left, intra.body, alpha, eps);
    auto [m2, r1] = cross_neutralize(m1, intra.right, beta, eps);
    auto [r2, l2] = cross_neutralize(r1, l1, gamma, eps);
    return {l2, m2, r2};
}

Tensor mmd(const Tensor& x, const Tensor& y) {
    if (x.rank() != 2 || y.rank() != 2 || x.cols() != y.cols()) throw ShapeMismatch("mmd: sample widths differ");
    const std::size_t n = x.rows(), m = y.rows();
    const Tensor z = concat({x, y}, 0);
    const Tensor d = pairwise_sq_dist(z);
    Tensor h = median_upper_triangle(d);
    if (h.item() <= 0.0) h = Tensor::scalar(1.0);
    const Tensor k = eai::exp(neg(div(d, h)));
    const Tensor kxx = mean(slice_cols(slice_rows(k, 0, n), 0, n));
    const Tensor kyy = mean(slice_cols(slice_rows(k, n, n + m), n, n + m));
    const Tensor kxy = mean(slice_cols(slice_rows(k, 0, n), n, n + m));
    return clamp_min(sub(add(kxx, kyy), scale(kxy, 2.0)), 0.0);
}

Tensor alignment_loss(const std::vector<AlignedFeatures>& batch) {
    if (batch.size() < 2) throw BatchTooSmall("alignment_loss needs a batch of at least 2 samples");
    PerPart<std::vector<Tensor>> rows;
    for (const auto& sample : batch)
        for (Part p : kParts) rows[p].push_back(mean_rows(sample[p]));
    PerPart<Tensor> stacked;
    for (Part p : kParts) stacked[p] = concat(rows[p], 0);
    return add(add(mmd(stacked.left, stacked.body), mmd(stacked.body, stacked.right)),
               mmd(stacked.right, stacked.left));
}

}  // namespace eai
