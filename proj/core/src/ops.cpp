#include "eai/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eai/error.hpp"

namespace eai {

using detail::make_result;
using detail::Node;

namespace {

void require_rank2(const Tensor& x, const char* op) {
    if (!x.defined() || x.rank() != 2) {
        throw ShapeMismatch(std::string(op) + ": expected a rank-2 tensor");
    }
}

// Accumulates into the parent's gradient only if it participates.
double* parent_grad(Node& out, std::size_t i) {
    Node& p = *out.parents[i];
    return p.requires_grad ? p.grad_buffer() : nullptr;
}

const std::vector<double>& parent_value(const Node& out, std::size_t i) { return out.parents[i]->value; }

// c[M x N] += a[M x K] * b[K x N], with optional transposes of the operands.
void gemm_acc(const double* a, bool ta, const double* b, bool tb, double* c, std::size_t m,
              std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = ta ? a[p * m + i] : a[i * k + p];
            if (av == 0.0) continue;
            if (!tb) {
                const double* brow = b + p * n;
                for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
            } else {
                for (std::size_t j = 0; j < n; ++j) crow[j] += av * b[j * k + p];
            }
        }
    }
}

struct Broadcast {
    std::size_t rows, cols;
    std::size_t ar, ac, br, bc;

    std::size_t a_index(std::size_t r, std::size_t c) const {
        return (ar == 1 ? 0 : r) * ac + (ac == 1 ? 0 : c);
    }
    std::size_t b_index(std::size_t r, std::size_t c) const {
        return (br == 1 ? 0 : r) * bc + (bc == 1 ? 0 : c);
    }
};

Broadcast broadcast_shapes(const Tensor& a, const Tensor& b, const char* op) {
    require_rank2(a, op);
    require_rank2(b, op);
    Broadcast bc{0, 0, a.rows(), a.cols(), b.rows(), b.cols()};
    auto merge = [&](std::size_t x, std::size_t y) {
        if (x == y || y == 1) return x;
        if (x == 1) return y;
        throw ShapeMismatch(std::string(op) + ": cannot broadcast " + shape_str(a.shape()) + " with " +
                            shape_str(b.shape()));
    };
    bc.rows = merge(bc.ar, bc.br);
    bc.cols = merge(bc.ac, bc.bc);
    return bc;
}

template <class Fwd, class DA, class DB>
Tensor binary(const char* op, const Tensor& a, const Tensor& b, Fwd fwd, DA da, DB db) {
    const Broadcast bc = broadcast_shapes(a, b, op);
    std::vector<double> out(bc.rows * bc.cols);
    const auto av = a.data();
    const auto bv = b.data();
    for (std::size_t r = 0; r < bc.rows; ++r) {
        for (std::size_t c = 0; c < bc.cols; ++c) {
            out[r * bc.cols + c] = fwd(av[bc.a_index(r, c)], bv[bc.b_index(r, c)]);
        }
    }
    return make_result(op, {bc.rows, bc.cols}, std::move(out), {&a, &b}, [bc, da, db](Node& o) {
        const auto& x = parent_value(o, 0);
        const auto& y = parent_value(o, 1);
        double* gx = parent_grad(o, 0);
        double* gy = parent_grad(o, 1);
        for (std::size_t r = 0; r < bc.rows; ++r) {
            for (std::size_t c = 0; c < bc.cols; ++c) {
                const std::size_t k = r * bc.cols + c;
                const double g = o.grad[k];
                const double xv = x[bc.a_index(r, c)];
                const double yv = y[bc.b_index(r, c)];
                if (gx) gx[bc.a_index(r, c)] += g * da(xv, yv, o.value[k]);
                if (gy) gy[bc.b_index(r, c)] += g * db(xv, yv, o.value[k]);
            }
        }
    });
}

// Elementwise unary op with derivative expressed through input and output.
template <class Fwd, class Deriv>
Tensor unary(const char* op, const Tensor& x, Fwd fwd, Deriv deriv) {
    require_rank2(x, op);
    const auto xv = x.data();
    std::vector<double> out(xv.size());
    for (std::size_t i = 0; i < xv.size(); ++i) out[i] = fwd(xv[i]);
    return make_result(op, x.shape(), std::move(out), {&x}, [deriv](Node& o) {
        const auto& in = parent_value(o, 0);
        double* g = parent_grad(o, 0);
        if (!g) return;
        for (std::size_t i = 0; i < in.size(); ++i) g[i] += o.grad[i] * deriv(in[i], o.value[i]);
    });
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    require_rank2(a, "matmul");
    require_rank2(b, "matmul");
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    if (b.rows() != k) {
        throw ShapeMismatch("matmul: inner dimensions differ, " + shape_str(a.shape()) + " x " +
                            shape_str(b.shape()));
    }
    std::vector<double> out(m * n, 0.0);
    gemm_acc(a.data().data(), false, b.data().data(), false, out.data(), m, k, n);
    return make_result("matmul", {m, n}, std::move(out), {&a, &b}, [m, k, n](Node& o) {
        const auto& av = parent_value(o, 0);
        const auto& bv = parent_value(o, 1);
        // dA = dC * B^T, dB = A^T * dC
        if (double* ga = parent_grad(o, 0)) gemm_acc(o.grad.data(), false, bv.data(), true, ga, m, n, k);
        if (double* gb = parent_grad(o, 1)) gemm_acc(av.data(), true, o.grad.data(), false, gb, k, m, n);
    });
}

Tensor transpose(const Tensor& x) {
    require_rank2(x, "transpose");
    const std::size_t r = x.rows(), c = x.cols();
    const auto xv = x.data();
    std::vector<double> out(r * c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out[j * r + i] = xv[i * c + j];
    return make_result("transpose", {c, r}, std::move(out), {&x}, [r, c](Node& o) {
        double* g = parent_grad(o, 0);
        if (!g) return;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) g[i * c + j] += o.grad[j * r + i];
    });
}

Tensor add(const Tensor& a, const Tensor& b) {
    return binary(
        "add", a, b, [](double x, double y) { return x + y; }, [](double, double, double) { return 1.0; },
        [](double, double, double) { return 1.0; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
    return binary(
        "sub", a, b, [](double x, double y) { return x - y; }, [](double, double, double) { return 1.0; },
        [](double, double, double) { return -1.0; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
    return binary(
        "mul", a, b, [](double x, double y) { return x * y; }, [](double, double y, double) { return y; },
        [](double x, double, double) { return x; });
}

Tensor div(const Tensor& a, const Tensor& b) {
    return binary(
        "div", a, b, [](double x, double y) { return x / y; },
        [](double, double y, double) { return 1.0 / y; }, [](double, double y, double q) { return -q / y; });
}

Tensor scale(const Tensor& x, double factor) {
    return unary(
        "scale", x, [factor](double v) { return v * factor; }, [factor](double, double) { return factor; });
}

Tensor add_scalar(const Tensor& x, double offset) {
    return unary(
        "add_scalar", x, [offset](double v) { return v + offset; }, [](double, double) { return 1.0; });
}

Tensor neg(const Tensor& x) { return scale(x, -1.0); }

Tensor sigmoid(const Tensor& x) {
    return unary(
        "sigmoid", x,
        [](double v) {
            // Split by sign so neither branch overflows.
            if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
            const double e = std::exp(v);
            return e / (1.0 + e);
        },
        [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& x) {
    return unary(
        "tanh", x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Tensor exp(const Tensor& x) {
    return unary(
        "exp", x, [](double v) { return std::exp(v); }, [](double, double y) { return y; });
}

Tensor sqrt(const Tensor& x) {
    return unary(
        "sqrt", x, [](double v) { return std::sqrt(v); }, [](double, double y) { return 0.5 / y; });
}

Tensor square(const Tensor& x) {
    return unary(
        "square", x, [](double v) { return v * v; }, [](double v, double) { return 2.0 * v; });
}

Tensor abs(const Tensor& x) {
    return unary(
        "abs", x, [](double v) { return std::abs(v); },
        [](double v, double) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); });
}

Tensor clamp_min(const Tensor& x, double floor) {
    return unary(
        "clamp_min", x, [floor](double v) { return std::max(v, floor); },
        [floor](double v, double) { return v > floor ? 1.0 : 0.0; });
}

Tensor sum(const Tensor& x) {
    require_rank2(x, "sum");
    const auto xv = x.data();
    const double s = std::accumulate(xv.begin(), xv.end(), 0.0);
    return make_result("sum", {1, 1}, {s}, {&x}, [](Node& o) {
        double* g = parent_grad(o, 0);
        if (!g) return;
        const std::size_t n = o.parents[0]->value.size();
        for (std::size_t i = 0; i < n; ++i) g[i] += o.grad[0];
    });
}

Tensor mean(const Tensor& x) {
    require_rank2(x, "mean");
    const auto xv = x.data();
    const double n = static_cast<double>(xv.size());
    const double s = std::accumulate(xv.begin(), xv.end(), 0.0) / n;
    return make_result("mean", {1, 1}, {s}, {&x}, [n](Node& o) {
        double* g = parent_grad(o, 0);
        if (!g) return;
        const double share = o.grad[0] / n;
        for (std::size_t i = 0; i < o.parents[0]->value.size(); ++i) g[i] += share;
    });
}

Tensor mean_rows(const Tensor& x) {
    require_rank2(x, "mean_rows");
    const std::size_t r = x.rows(), c = x.cols();
    const auto xv = x.data();
    std::vector<double> out(c, 0.0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out[j] += xv[i * c + j];
    for (double& v : out) v /= static_cast<double>(r);
    return make_result("mean_rows", {1, c}, std::move(out), {&x}, [r, c](Node& o) {
        double* g = parent_grad(o, 0);
        if (!g) return;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) g[i * c + j] += o.grad[j] / static_cast<double>(r);
    });
}

Tensor broadcast_rows(const Tensor& row, std::size_t rows) {
    require_rank2(row, "broadcast_rows");
    if (row.rows() != 1) throw ShapeMismatch("broadcast_rows: expected a 1xC row vector");
    if (rows == 0) throw ShapeMismatch("broadcast_rows: zero rows");
    const std::size_t c = row.cols();
    std::vector<double> out(rows * c);
    for (std::size_t i = 0; i < rows; ++i) std::copy(row.data().begin(), row.data().end(), out.begin() + i * c);
    return make_result("broadcast_rows", {rows, c}, std::move(out), {&row}, [rows, c](Node& o) {
        double* g = parent_grad(o, 0);
        if (!g) return;
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < c; ++j) g[j] += o.grad[i * c + j];
    });
}

Tensor norm_last_axis(const Tensor& x) {
    require_rank2(x, "norm_last_axis");
    const std::size_t r = x.rows(), c = x.cols();
    const auto xv = x.data();
    std::vector<double> out(r);
    for (std::size_t i = 0; i < r; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < c; ++j) s += xv[i * c + j] * xv[i * c + j];
        out[i] = std::sqrt(s);
    }
    return make_result("norm_last_axis", {r, 1}, std::move(out), {&x}, [r, c](Node& o) {
        double* g = parent_grad(o, 0);
        if (!g) return;
        const auto& in = parent_value(o, 0);
        for (std::size_t i = 0; i < r; ++i) {
            const double n = o.value[i];
            if (n == 0.0) continue;
            const double s = o.grad[i] / n;
            for (std::size_t j = 0; j < c; ++j) g[i * c + j] += s * in[i * c + j];
        }
    });
}

Tensor softmax_rows(const Tensor& x) {
    require_rank2(x, "softmax_rows");
    const std::size_t r = x.rows(), c = x.cols();
    const auto xv = x.data();
    std::vector<double> out(r * c);
    for (std::size_t i = 0; i < r; ++i) {
        const double* row = xv.data() + i * c;
        const double mx = *std::max_element(row, row + c);
        double s = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            out[i * c + j] = std::exp(row[j] - mx);
            s += out[i * c + j];
        }
        for (std::size_t j = 0; j < c; ++j) out[i * c + j] /= s;
    }
    return make_result("softmax_rows", {r, c}, std::move(out), {&x}, [r, c](Node& o) {
        double* g = parent_grad(o, 0);
        if (!g) return;
        for (std::size_t i = 0; i < r; ++i) {
            const double* y = o.value.data() + i * c;
            const double* gy = o.grad.data() + i * c;
            double dot = 0.0;
            for (std::size_t j = 0; j < c; ++j) dot += gy[j] * y[j];
            for (std::size_t j = 0; j < c; ++j) g[i * c + j] += y[j] * (gy[j] - dot);
        }
    });
}

MeanVar mean_var_rows(const Tensor& x) {
    require_rank2(x, "mean_var_rows");
    Tensor mu = mean_rows(x);
    Tensor centered = sub(x, mu);
    return {mu, mean_rows(square(centered))};
}

Tensor reshape(const Tensor& x, Shape shape) {
    if (shape_numel(shape) != x.numel()) {
        throw ShapeMismatch("reshape: " + shape_str(x.shape()) + " to " + shape_str(shape));
    }
    return make_result("reshape", std::move(shape), x.to_vector(), {&x}, [](Node& o) {
        double* g = parent_grad(o, 0);
        if (!g) return;
        for (std::size_t i = 0; i < o.grad.size(); ++i) g[i] += o.grad[i];
    });
}

Tensor concat(const std::vector<Tensor>& parts, std::size_t axis) {
    if (parts.empty()) throw ShapeMismatch("concat: no inputs");
    if (axis > 1) throw ShapeMismatch("concat: axis must be 0 or 1");
    for (const auto& p : parts) require_rank2(p, "concat");
    const std::size_t fixed = axis == 0 ? parts[0].cols() : parts[0].rows();
    std::vector<std::size_t> extents;
    std::size_t total = 0;
    for (const auto& p : parts) {
        const std::size_t other = axis == 0 ? p.cols() : p.rows();
        if (other != fixed) throw ShapeMismatch("concat: mismatched extents along the fixed axis");
        extents.push_back(axis == 0 ? p.rows() : p.cols());
        total += extents.back();
    }
    const std::size_t rows = axis == 0 ? total : fixed;
    const std::size_t cols = axis == 0 ? fixed : total;
    std::vector<double> out(rows * cols);
    std::size_t offset = 0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const auto pv = parts[k].data();
        const std::size_t pr = parts[k].rows(), pc = parts[k].cols();
        for (std::size_t i = 0; i < pr; ++i)
            for (std::size_t j = 0; j < pc; ++j) {
                const std::size_t oi = axis == 0 ? offset + i : i;
                const std::size_t oj = axis == 0 ? j : offset + j;
                out[oi * cols + oj] = pv[i * pc + j];
            }
        offset += extents[k];
    }

    auto node = std::make_shared<Node>();
    node->shape = {rows, cols};
    node->value = std::move(out);
    node->op = "concat";
    const bool any = std::any_of(parts.begin(), parts.end(), [](const Tensor& t) { return t.requires_grad(); });
    if (debug_checks()) {
        for (double v : node->value)
            if (!std::isfinite(v)) throw NonFiniteError("non-finite value in concat");
    }
    if (grad_enabled() && any) {
        node->requires_grad = true;
        for (const auto& p : parts) node->parents.push_back(p.node());
        node->backward = [axis, extents, cols](Node& o) {
            std::size_t off = 0;
            for (std::size_t k = 0; k < o.parents.size(); ++k) {
                Node& p = *o.parents[k];
                if (p.requires_grad) {
                    double* g = p.grad_buffer();
                    const std::size_t pr = p.shape[0], pc = p.shape[1];
                    for (std::size_t i = 0; i < pr; ++i)
                        for (std::size_t j = 0; j < pc; ++j) {
                            const std::size_t oi = axis == 0 ? off + i : i;
                            const std::size_t oj = axis == 0 ? j : off + j;
                            g[i * pc + j] += o.grad[oi * cols + oj];
                        }
                }
                off += extents[k];
            }
        };
    }
    return Tensor(std::move(node));
}

Tensor slice_rows(const Tensor& x, std::size_t begin, std::size_t end) {
    require_rank2(x, "slice_rows");
    if (begin >= end || end > x.rows()) {
        throw IndexError("slice_rows: range [" + std::to_string(begin) + ", " + std::to_string(end) +
                         ") invalid for " + shape_str(x.shape()));
    }
    const std::size_t c = x.cols();
    const auto xv = x.data();
    std::vector<double> out(xv.begin() + begin * c, xv.begin() + end * c);
    return make_result("slice_rows", {end - begin, c}, std::move(out), {&x}, [begin, c](Node& o) {
        double* g = parent_grad(o, 0);
        if (!g) return;
        for (std::size_t i = 0; i < o.grad.size(); ++i) g[begin * c + i] += o.grad[i];
    });
}

Tensor slice_cols(const Tensor& x, std::size_t begin, std::size_t end) {
    require_rank2(x, "slice_cols");
    if (begin >= end || end > x.cols()) {
        throw IndexError("slice_cols: range [" + std::to_string(begin) + ", " + std::to_string(end) +
                         ") invalid for " + shape_str(x.shape()));
    }
    const std::size_t r = x.rows(), c = x.cols(), w = end - begin;
    const auto xv = x.data();
    std::vector<double> out(r * w);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < w; ++j) out[i * w + j] = xv[i * c + begin + j];
    return make_result("slice_cols", {r, w}, std::move(out), {&x}, [r, c, w, begin](Node& o) {
        double* g = parent_grad(o, 0);
        if (!g) return;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < w; ++j) g[i * c + begin + j] += o.grad[i * w + j];
    });
}

Tensor pairwise_sq_dist(const Tensor& z) {
    require_rank2(z, "pairwise_sq_dist");
    const std::size_t n = z.rows(), c = z.cols();
    const auto zv = z.data();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < c; ++k) {
                const double d = zv[i * c + k] - zv[j * c + k];
                s += d * d;
            }
            out[i * n + j] = s;
        }
    return make_result("pairwise_sq_dist", {n, n}, std::move(out), {&z}, [n, c](Node& o) {
        double* g = parent_grad(o, 0);
        if (!g) return;
        const auto& in = parent_value(o, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double w = 2.0 * o.grad[i * n + j];
                if (w == 0.0 || i == j) continue;
                for (std::size_t k = 0; k < c; ++k) {
                    const double d = in[i * c + k] - in[j * c + k];
                    g[i * c + k] += w * d;
                    g[j * c + k] -= w * d;
                }
            }
    });
}

Tensor median_upper_triangle(const Tensor& m) {
    require_rank2(m, "median_upper_triangle");
    const std::size_t n = m.rows();
    if (m.cols() != n || n < 2) throw ShapeMismatch("median_upper_triangle: need a square matrix with n >= 2");
    const auto mv = m.data();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) idx.push_back(i * n + j);
    // Ties are broken by flat index so the selection is deterministic.
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return mv[a] < mv[b] || (mv[a] == mv[b] && a < b);
    });
    const std::size_t count = idx.size();
    std::vector<std::size_t> picked;
    if (count % 2 == 1) {
        picked = {idx[count / 2]};
    } else {
        picked = {idx[count / 2 - 1], idx[count / 2]};
    }
    double value = 0.0;
    for (auto p : picked) value += mv[p];
    value /= static_cast<double>(picked.size());
    return make_result("median_upper_triangle", {1, 1}, {value}, {&m}, [picked](Node& o) {
        double* g = parent_grad(o, 0);
        if (!g) return;
        for (auto p : picked) g[p] += o.grad[0] / static_cast<double>(picked.size());
    });
}

}  // namespace eai
