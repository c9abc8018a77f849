#include <cmath>
#include <numbers>

#include "eai/error.hpp"
#include "eai/ops.hpp"
#include "eai/spectral.hpp"
#include "helpers.hpp"

using namespace eai;

namespace {

// Textbook DCT-II of one sequence, evaluated term by term.
std::vector<double> naive_dct(const std::vector<double>& x, std::size_t coeffs) {
    const double l = static_cast<double>(x.size());
    std::vector<double> out(coeffs, 0.0);
    for (std::size_t k = 0; k < coeffs; ++k) {
        const double s = k == 0 ? std::sqrt(1.0 / l) : std::sqrt(2.0 / l);
        for (std::size_t t = 0; t < x.size(); ++t) {
            out[k] += s * x[t] * std::cos(std::numbers::pi * (2.0 * t + 1.0) * k / (2.0 * l));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("basis columns are orthonormal over a grid of sizes") {
    for (std::size_t l : {1, 2, 5, 12, 20, 35, 60}) {
        for (std::size_t h : {std::size_t{1}, l / 2 + 1, l}) {
            if (h > l) continue;
            CAPTURE(l);
            CAPTURE(h);
            const DctBasis basis(l, h);
            const Tensor gram = matmul(basis.matrix_t(), basis.matrix());
            CHECK(testing::max_abs_diff(gram, Tensor::identity(h)) < 1e-10);
        }
    }
}

TEST_CASE("forward transform matches the scalar definition") {
    Rng rng(5);
    const DctBasis basis(20, 9);
    const Tensor x = testing::random_tensor(rng, 4, 20);
    const Tensor c = dct_forward(x, basis);
    for (std::size_t r = 0; r < 4; ++r) {
        std::vector<double> row(x.data().begin() + r * 20, x.data().begin() + (r + 1) * 20);
        const auto ref = naive_dct(row, 9);
        for (std::size_t k = 0; k < 9; ++k) CHECK(std::abs(c.at(r, k) - ref[k]) < 1e-12);
    }
}

TEST_CASE("full-rank round trip reproduces the trajectory") {
    Rng rng(8);
    for (std::size_t l : {3, 10, 20, 50}) {
        const DctBasis basis(l, l);
        const Tensor x = testing::random_tensor(rng, 6, l, 100.0);
        CHECK(testing::max_abs_diff(dct_inverse(dct_forward(x, basis), basis), x) < 1e-9);
    }
}

TEST_CASE("a constant trajectory lives in the first coefficient") {
    const DctBasis basis(16, 8);
    const Tensor x = Tensor::full({2, 16}, 3.0);
    const Tensor c = dct_forward(x, basis);
    CHECK(c.at(1, 0) == doctest::Approx(3.0 * 4.0).epsilon(1e-12));
    for (std::size_t k = 1; k < 8; ++k) CHECK(std::abs(c.at(0, k)) < 1e-12);
    // Truncation keeps a constant exactly.
    CHECK(testing::max_abs_diff(dct_inverse(c, basis), x) < 1e-12);
}

TEST_CASE("padding replicates the last pose") {
    const Tensor x = Tensor::matrix({{1, 2, 3}, {4, 5, 6}});
    const Tensor p = pad_replicate_last(x, 2);
    CHECK(p.cols() == 5);
    CHECK(p.to_vector() == std::vector<double>{1, 2, 3, 3, 3, 4, 5, 6, 6, 6});
    CHECK(pad_replicate_last(x, 0).to_vector() == x.to_vector());
}

TEST_CASE("basis and transform argument checks") {
    CHECK_THROWS_AS(DctBasis(4, 5), ConfigError);
    CHECK_THROWS_AS(DctBasis(0, 0), ConfigError);
    const DctBasis basis(6, 3);
    CHECK_THROWS_AS(dct_forward(Tensor::zeros({2, 5}), basis), ShapeMismatch);
    CHECK_THROWS_AS(dct_inverse(Tensor::zeros({2, 4}), basis), ShapeMismatch);
}

TEST_CASE("gradients flow through pad and transform") {
    Rng rng(2);
    const DctBasis basis(9, 5);
    Tensor x = testing::random_tensor(rng, 3, 6, 1.0, true);
    Tensor w = testing::random_tensor(rng, 3, 5);
    auto f = [&] { return sum(mul(dct_forward(pad_replicate_last(x, 3), basis), w)); };
    CHECK(testing::check(f, {{"x", x}}).max_rel_error < 1e-6);
}
