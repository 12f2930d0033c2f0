#include "veracity/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "veracity/error.hpp"

namespace veracity::nn {

namespace {

double scalar(const Tape& t, Var out) {
    const Tensor& v = t.value(out);
    if (v.rows() != 1 || v.cols() != 1) throw ShapeError("grad_check: function must return 1x1, got " + shape_string(v));
    if (!std::isfinite(v(0, 0))) throw NumericError("grad_check: non-finite function value");
    return v(0, 0);
}

void track(GradCheckResult& r, double analytic, double numeric, std::size_t input, std::size_t index) {
    if (!std::isfinite(analytic)) throw NumericError("grad_check: non-finite analytic gradient");
    const double err = std::abs(analytic - numeric) / std::max(1.0, std::abs(numeric));
    if (err > r.max_rel_error) r = {err, input, index};
}

}  // namespace

GradCheckResult grad_check(const InputFunction& f, std::vector<Tensor> inputs, double h) {
    if (!(h > 0.0)) throw InvalidArgument("grad_check: h must be positive");
    auto evaluate = [&](bool with_grad, std::vector<Tensor>* grads) {
        Tape t;
        std::vector<Var> vars;
        for (const Tensor& x : inputs) vars.push_back(t.variable(x));
        Var out = f(t, vars);
        const double value = scalar(t, out);
        if (with_grad) {
            t.backward(out);
            for (Var v : vars) grads->push_back(t.grad(v));
        }
        return value;
    };
    std::vector<Tensor> analytic;
    evaluate(true, &analytic);

    GradCheckResult result;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        for (std::size_t j = 0; j < inputs[i].size(); ++j) {
            const double orig = inputs[i][j];
            inputs[i][j] = orig + h;
            const double up = evaluate(false, nullptr);
            inputs[i][j] = orig - h;
            const double down = evaluate(false, nullptr);
            inputs[i][j] = orig;
            track(result, analytic[i][j], (up - down) / (2.0 * h), i, j);
        }
    }
    return result;
}

GradCheckResult grad_check(const ParameterFunction& f, const std::vector<Parameter*>& params, double h) {
    if (!(h > 0.0)) throw InvalidArgument("grad_check: h must be positive");
    std::vector<Tensor> analytic;
    {
        Tape t;
        Var out = f(t);
        scalar(t, out);
        t.backward(out);
        for (const Parameter* p : params) analytic.push_back(t.parameter_grad(*p));
    }
    auto evaluate = [&] {
        Tape t;
        return scalar(t, f(t));
    };
    GradCheckResult result;
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& value = params[i]->value;
        for (std::size_t j = 0; j < value.size(); ++j) {
            const double orig = value[j];
            value[j] = orig + h;
            const double up = evaluate();
            value[j] = orig - h;
            const double down = evaluate();
            value[j] = orig;
            track(result, analytic[i][j], (up - down) / (2.0 * h), i, j);
        }
    }
    return result;
}

}  // namespace veracity::nn
