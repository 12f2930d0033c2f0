#include "veracity/nn/tape.hpp"

#include "veracity/error.hpp"

namespace veracity::nn {

Var Tape::push(Tensor value, bool requires_grad) {
    Node node;
    node.value = std::move(value);
    node.requires_grad = requires_grad;
    nodes_.push_back(std::move(node));
    return Var{nodes_.size() - 1};
}

Var Tape::constant(Tensor value) { return push(std::move(value), false); }

Var Tape::variable(Tensor value) { return push(std::move(value), true); }

Var Tape::parameter(const Parameter& p) {
    if (auto it = params_.find(&p); it != params_.end()) return Var{it->second};
    Var v = push(p.value, true);
    params_.emplace(&p, v.id);
    return v;
}

Var Tape::record(Tensor value, const std::vector<Var>& parents, Backward backward) {
    bool needs = false;
    for (Var p : parents) {
        if (p.id >= nodes_.size()) throw InvalidArgument("tape: parent refers to a later node");
        needs = needs || nodes_[p.id].requires_grad;
    }
    Var v = push(std::move(value), needs);
    if (needs) nodes_.back().backward = std::move(backward);
    return v;
}

const Tensor& Tape::grad(Var v) const {
    const Node& node = nodes_.at(v.id);
    if (!backward_done_ || !node.requires_grad) throw InvalidArgument("tape: no gradient for this node");
    return node.grad;
}

void Tape::accumulate(Var v, const Tensor& delta) {
    Node& node = nodes_.at(v.id);
    if (!node.requires_grad) return;
    if (!node.grad.same_shape(delta)) {
        throw ShapeError("tape: gradient " + shape_string(delta) + " for value " + shape_string(node.value));
    }
    auto g = node.grad.values();
    auto d = delta.values();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += d[i];
}

void Tape::backward(Var loss) {
    if (loss.id >= nodes_.size()) throw InvalidArgument("tape: unknown loss node");
    const Tensor& lv = nodes_[loss.id].value;
    if (lv.rows() != 1 || lv.cols() != 1) throw ShapeError("tape: backward needs a 1x1 loss, got " + shape_string(lv));
    for (Node& node : nodes_) {
        if (node.requires_grad) node.grad = Tensor(node.value.rows(), node.value.cols());
    }
    backward_done_ = true;
    if (!nodes_[loss.id].requires_grad) return;
    nodes_[loss.id].grad(0, 0) = 1.0;
    for (std::size_t i = loss.id + 1; i-- > 0;) {
        Node& node = nodes_[i];
        if (!node.requires_grad || !node.backward) continue;
        // Closures only write gradients of earlier nodes and never resize nodes_.
        node.backward(*this, node.grad);
    }
}

Tensor Tape::parameter_grad(const Parameter& p) const {
    auto it = params_.find(&p);
    if (it == params_.end() || !backward_done_) return Tensor(p.value.rows(), p.value.cols());
    return nodes_[it->second].grad;
}

void Tape::accumulate_into(const std::vector<Parameter*>& params) const {
    for (Parameter* p : params) {
        auto it = params_.find(p);
        if (it == params_.end() || !backward_done_) continue;
        const Tensor& g = nodes_[it->second].grad;
        if (!p->grad.same_shape(g)) p->grad = Tensor(g.rows(), g.cols());
        for (std::size_t i = 0; i < g.size(); ++i) p->grad[i] += g[i];
    }
}

}  // namespace veracity::nn
