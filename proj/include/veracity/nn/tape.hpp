#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "veracity/nn/tensor.hpp"

namespace veracity::nn {

struct Parameter {
    Parameter() = default;
    Parameter(std::string name, std::size_t rows, std::size_t cols)
        : name(std::move(name)), value(rows, cols), grad(rows, cols) {}
    Parameter(std::string name, Tensor value) : name(std::move(name)), value(std::move(value)) {
        grad = Tensor(this->value.rows(), this->value.cols());
    }

    void zero_grad() { grad.fill(0.0); }

    std::string name;
    Tensor value;
    Tensor grad;
};

struct Var {
    std::size_t id = 0;
};

// Records one forward pass; backward() replays it in reverse. A tape is not
// thread-safe, but any number of tapes may read the same Parameters at once.
class Tape {
public:
    using Backward = std::function<void(Tape&, const Tensor& grad_out)>;

    Var constant(Tensor value);
    Var variable(Tensor value);
    // Repeated calls with the same parameter return the same node.
    Var parameter(const Parameter& p);

    Var record(Tensor value, const std::vector<Var>& parents, Backward backward);

    const Tensor& value(Var v) const { return nodes_.at(v.id).value; }
    const Tensor& grad(Var v) const;
    bool requires_grad(Var v) const { return nodes_.at(v.id).requires_grad; }
    std::size_t size() const { return nodes_.size(); }

    // Adds `delta` into the gradient of `v` when it requires one.
    void accumulate(Var v, const Tensor& delta);

    // `loss` must be 1x1.
    void backward(Var loss);

    // Gradient reaching `p` in the last backward pass; zeros when unused.
    Tensor parameter_grad(const Parameter& p) const;
    // Adds parameter gradients into Parameter::grad.
    void accumulate_into(const std::vector<Parameter*>& params) const;

private:
    struct Node {
        Tensor value;
        Tensor grad;
        Backward backward;
        bool requires_grad = false;
    };

    Var push(Tensor value, bool requires_grad);

    std::vector<Node> nodes_;
    std::unordered_map<const Parameter*, std::size_t> params_;
    bool backward_done_ = false;
};

}  // namespace veracity::nn
