#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace eai {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

struct Node;
using NodePtr = std::shared_ptr<Node>;
using BackwardFn = std::function<void(Node& out)>;

// One vertex of the reverse-mode tape. Leaves have no backward function.
struct Node {
    Shape shape;
    std::vector<double> value;
    std::vector<double> grad;  // empty until a gradient reaches this node
    bool requires_grad = false;
    const char* op = "leaf";
    std::vector<NodePtr> parents;
    BackwardFn backward;

    double* grad_buffer() {
        if (grad.empty()) grad.assign(value.size(), 0.0);
        return grad.data();
    }
};

}  // namespace detail

// Dense row-major tensor of doubles with optional gradient tracking.
//
// A Tensor is a cheap handle: copies share the same storage and tape node,
// which is what lets parameters be updated in place by the optimizer.
// Use clone() for an independent deep copy. Model math is rank-2 throughout;
// scalars are 1x1 and row vectors are 1xN.
class Tensor {
public:
    Tensor() = default;
    Tensor(Shape shape, std::vector<double> values, bool requires_grad = false);

    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor full(Shape shape, double value, bool requires_grad = false);
    static Tensor scalar(double value, bool requires_grad = false);
    static Tensor identity(std::size_t n, bool requires_grad = false);
    // Row-major literal, e.g. Tensor::matrix({{1, 2}, {3, 4}}).
    static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows,
                         bool requires_grad = false);

    bool defined() const { return node_ != nullptr; }
    const Shape& shape() const;
    std::size_t rank() const { return shape().size(); }
    std::size_t numel() const;
    std::size_t rows() const;
    std::size_t cols() const;

    std::span<const double> data() const;
    // Direct mutable access, meant for leaves (parameter updates, fixtures).
    std::span<double> mutable_data();
    std::vector<double> to_vector() const;
    double at(std::size_t r, std::size_t c) const;
    double item() const;

    bool requires_grad() const;
    void set_requires_grad(bool on);
    bool has_grad() const;
    // Gradient buffer; empty span when no gradient has been accumulated.
    std::span<const double> grad() const;
    std::span<double> mutable_grad();
    void zero_grad();

    // Runs reverse-mode differentiation from this scalar and frees the tape
    // behind it. Leaves keep their accumulated gradients.
    void backward();

    Tensor detach() const;
    Tensor clone() const;

    const char* op_name() const;
    const detail::NodePtr& node() const { return node_; }
    explicit Tensor(detail::NodePtr node) : node_(std::move(node)) {}

private:
    detail::NodePtr node_;
};

// Disables tape recording on the current thread while alive.
class NoGradGuard {
public:
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

private:
    bool previous_;
};

bool grad_enabled();

// Debug screening: when on, every op checks its output for NaN/Inf and
// throws NonFiniteError naming the op. Defaults to on in non-NDEBUG builds
// and can be forced with EAI_DEBUG_CHECKS=0/1.
void set_debug_checks(bool on);
bool debug_checks();

// Test-only hook: scales the incoming gradient of every node produced by the
// named op before its backward rule runs. Empty string disables.
void inject_gradient_fault(const std::string& op_name, double factor = 1.5);

namespace detail {

// Builds the output tensor of an op, wiring it into the tape when any input
// requires a gradient and recording is enabled.
Tensor make_result(const char* op, Shape shape, std::vector<double> value,
                   std::initializer_list<const Tensor*> inputs, BackwardFn backward);

}  // namespace detail

}  // namespace eai
