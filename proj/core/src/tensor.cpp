#include "eai/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <unordered_set>

#include "eai/error.hpp"

namespace eai {

namespace {

thread_local bool t_grad_enabled = true;

bool default_debug_checks() {
    if (const char* env = std::getenv("EAI_DEBUG_CHECKS")) return std::string(env) != "0";
#ifdef NDEBUG
    return false;
#else
    return true;
#endif
}

bool g_debug_checks = default_debug_checks();

std::mutex g_fault_mutex;
std::string g_fault_op;
double g_fault_factor = 1.0;

void check_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) throw NonFiniteError(std::string("non-finite value in ") + what);
    }
}

}  // namespace

std::size_t shape_numel(const Shape& shape) {
    std::size_t n = 1;
    for (auto e : shape) n *= e;
    return n;
}

std::string shape_str(const Shape& shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
    os << ']';
    return os.str();
}

Tensor::Tensor(Shape shape, std::vector<double> values, bool requires_grad) {
    for (auto e : shape) {
        if (e == 0) throw ShapeMismatch("tensor extents must be positive, got " + shape_str(shape));
    }
    if (shape_numel(shape) != values.size()) {
        throw ShapeMismatch("shape " + shape_str(shape) + " does not match " +
                            std::to_string(values.size()) + " values");
    }
    check_finite(values, "tensor construction");
    node_ = std::make_shared<detail::Node>();
    node_->shape = std::move(shape);
    node_->value = std::move(values);
    node_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
    const auto n = shape_numel(shape);
    return Tensor(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) { return Tensor({1, 1}, {value}, requires_grad); }

Tensor Tensor::identity(std::size_t n, bool requires_grad) {
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    return Tensor({n, n}, std::move(v), requires_grad);
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows, bool requires_grad) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<double> v;
    v.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeMismatch("ragged matrix literal");
        v.insert(v.end(), row.begin(), row.end());
    }
    return Tensor({r, c}, std::move(v), requires_grad);
}

const Shape& Tensor::shape() const { return node_->shape; }
std::size_t Tensor::numel() const { return node_->value.size(); }

std::size_t Tensor::rows() const {
    if (rank() != 2) throw ShapeMismatch("expected rank-2 tensor, got " + shape_str(shape()));
    return shape()[0];
}

std::size_t Tensor::cols() const {
    if (rank() != 2) throw ShapeMismatch("expected rank-2 tensor, got " + shape_str(shape()));
    return shape()[1];
}

std::span<const double> Tensor::data() const { return node_->value; }
std::span<double> Tensor::mutable_data() { return node_->value; }
std::vector<double> Tensor::to_vector() const { return node_->value; }

double Tensor::at(std::size_t r, std::size_t c) const {
    if (r >= rows() || c >= cols()) throw IndexError("tensor index out of range");
    return node_->value[r * cols() + c];
}

double Tensor::item() const {
    if (numel() != 1) throw ShapeMismatch("item() on tensor of shape " + shape_str(shape()));
    return node_->value[0];
}

bool Tensor::requires_grad() const { return node_->requires_grad; }
void Tensor::set_requires_grad(bool on) { node_->requires_grad = on; }
bool Tensor::has_grad() const { return !node_->grad.empty(); }
std::span<const double> Tensor::grad() const { return node_->grad; }

std::span<double> Tensor::mutable_grad() {
    node_->grad_buffer();
    return node_->grad;
}

void Tensor::zero_grad() { node_->grad.clear(); }

const char* Tensor::op_name() const { return node_->op; }

void Tensor::backward() {
    if (numel() != 1) throw ShapeMismatch("backward() requires a scalar, got " + shape_str(shape()));
    if (!node_->requires_grad) return;

    // Iterative post-order DFS gives a topological order of the tape.
    std::vector<detail::Node*> order;
    std::unordered_set<detail::Node*> visited;
    std::vector<std::pair<detail::Node*, std::size_t>> stack{{node_.get(), 0}};
    visited.insert(node_.get());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->parents.size()) {
            detail::Node* parent = node->parents[next++].get();
            if (parent->requires_grad && visited.insert(parent).second) stack.push_back({parent, 0});
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    node_->grad_buffer()[0] += 1.0;

    std::string fault_op;
    double fault_factor = 1.0;
    {
        std::lock_guard lock(g_fault_mutex);
        fault_op = g_fault_op;
        fault_factor = g_fault_factor;
    }

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        detail::Node* node = *it;
        if (!node->backward || node->grad.empty()) continue;
        if (!fault_op.empty() && fault_op == node->op) {
            for (double& g : node->grad) g *= fault_factor;
        }
        node->backward(*node);
    }

    for (detail::Node* node : order) {
        if (node->backward) {
            node->backward = nullptr;
            node->parents.clear();
        }
    }
}

Tensor Tensor::detach() const {
    auto node = std::make_shared<detail::Node>();
    node->shape = node_->shape;
    node->value = node_->value;
    return Tensor(std::move(node));
}

Tensor Tensor::clone() const {
    Tensor out = detach();
    out.node_->requires_grad = node_->requires_grad;
    return out;
}

NoGradGuard::NoGradGuard() : previous_(t_grad_enabled) { t_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { t_grad_enabled = previous_; }

bool grad_enabled() { return t_grad_enabled; }

void set_debug_checks(bool on) { g_debug_checks = on; }
bool debug_checks() { return g_debug_checks; }

void inject_gradient_fault(const std::string& op_name, double factor) {
    std::lock_guard lock(g_fault_mutex);
    g_fault_op = op_name;
    g_fault_factor = factor;
}

namespace detail {

Tensor make_result(const char* op, Shape shape, std::vector<double> value,
                   std::initializer_list<const Tensor*> inputs, BackwardFn backward) {
    if (g_debug_checks) check_finite(value, op);
    auto node = std::make_shared<Node>();
    node->shape = std::move(shape);
    node->value = std::move(value);
    node->op = op;
    if (t_grad_enabled) {
        bool any = std::any_of(inputs.begin(), inputs.end(),
                               [](const Tensor* t) { return t->requires_grad(); });
        if (any) {
            node->requires_grad = true;
            node->parents.reserve(inputs.size());
            for (const Tensor* t : inputs) node->parents.push_back(t->node());
            node->backward = std::move(backward);
        }
    }
    return Tensor(std::move(node));
}

}  // namespace detail

}  // namespace eai
