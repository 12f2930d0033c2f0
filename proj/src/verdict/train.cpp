#include "veracity/verdict/train.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <random>

#include "veracity/error.hpp"
#include "veracity/nn/ops.hpp"

namespace veracity::verdict {

namespace {

struct ExampleGrad {
    double loss = 0.0;
    std::vector<nn::Tensor> grads;
};

ExampleGrad example_gradient(const Head& head, const std::vector<const nn::Parameter*>& params, const Example& ex) {
    nn::Tape t;
    ExampleGrad out;
    const nn::Var probs = head.forward(t, ex.inputs);
    if (!t.value(probs).all_finite()) {
        out.loss = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    nn::Var loss = nn::cross_entropy(t, probs, class_index(ex.label));
    out.loss = t.value(loss)(0, 0);
    if (!std::isfinite(out.loss)) return out;
    t.backward(loss);
    for (const nn::Parameter* p : params) out.grads.push_back(t.parameter_grad(*p));
    return out;
}

}  // namespace

TrainConfig TrainConfig::defaults(HeadKind kind) {
    TrainConfig c;
    switch (kind) {
        case HeadKind::Nli: c.lr.base = 1e-2; break;
        case HeadKind::NliSent:
        case HeadKind::NliSan: c.lr.base = 1e-4; break;
        case HeadKind::NliPSent:
            c.lr.base = 1e-5;
            c.lr.boundary = 100;
            break;
        case HeadKind::NliGraph:
            c.epochs = 200;
            c.lr.base = 1e-4;
            c.lr.boundary = 100;
            break;
        case HeadKind::NliGraphAbl:
            c.epochs = 200;
            c.lr.base = 1e-3;
            c.lr.boundary = 100;
            break;
    }
    return c;
}

void TrainConfig::validate() const {
    if (epochs == 0 || batch_size == 0) throw InvalidArgument("train config: epochs and batch size must be positive");
    if (!(lr.base >= 0.0) || !(lr.factor > 0.0)) throw InvalidArgument("train config: bad learning rate schedule");
    if (!(adamw.eps > 0.0) || adamw.beta1 < 0.0 || adamw.beta1 >= 1.0 || adamw.beta2 < 0.0 || adamw.beta2 >= 1.0) {
        throw InvalidArgument("train config: bad AdamW settings");
    }
}

nlohmann::json TrainConfig::to_json() const {
    nlohmann::json j = {{"epochs", epochs},
                        {"batch_size", batch_size},
                        {"lr", lr.base},
                        {"lr_decay_factor", lr.factor},
                        {"beta1", adamw.beta1},
                        {"beta2", adamw.beta2},
                        {"eps", adamw.eps},
                        {"weight_decay", adamw.weight_decay}};
    j["lr_decay_epoch"] = lr.boundary ? nlohmann::json(*lr.boundary) : nlohmann::json(nullptr);
    return j;
}

TrainResult train(Head& head, const std::vector<Example>& data, const TrainConfig& config, std::uint64_t seed,
                  const EpochCallback& on_epoch) {
    config.validate();
    if (data.empty()) throw InvalidArgument("train: empty dataset");

    std::vector<nn::Parameter*> params = head.parameters();
    const std::vector<const nn::Parameter*> cparams(params.begin(), params.end());
    nn::AdamWState state = nn::make_adamw_state(params, config.adamw);
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        const double lr = nn::step_lr(config.lr, epoch);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            const auto batch = static_cast<std::ptrdiff_t>(end - start);
            std::vector<ExampleGrad> grads(static_cast<std::size_t>(batch));
            std::vector<std::exception_ptr> failures(static_cast<std::size_t>(batch));
#pragma omp parallel for schedule(dynamic) if (config.parallel)
            for (std::ptrdiff_t i = 0; i < batch; ++i) {
                const auto k = static_cast<std::size_t>(i);
                try {
                    grads[k] = example_gradient(head, cparams, data[order[start + k]]);
                } catch (...) {
                    failures[k] = std::current_exception();
                }
            }
            for (std::size_t k = 0; k < failures.size(); ++k) {
                if (!failures[k]) continue;
                const std::string& id = data[order[start + k]].inputs.claim_id;
                try {
                    std::rethrow_exception(failures[k]);
                } catch (const NumericError& e) {
                    throw NumericError("train: epoch " + std::to_string(epoch) + ", example '" + id + "': " + e.what());
                }
            }

            for (nn::Parameter* p : params) p->zero_grad();
            const double inv = 1.0 / static_cast<double>(batch);
            for (std::size_t k = 0; k < grads.size(); ++k) {
                if (!std::isfinite(grads[k].loss)) {
                    throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) + ", example '" +
                                       data[order[start + k]].inputs.claim_id + "'");
                }
                epoch_loss += grads[k].loss;
                for (std::size_t j = 0; j < params.size(); ++j) {
                    auto g = params[j]->grad.values();
                    const auto& e = grads[k].grads[j];
                    for (std::size_t x = 0; x < g.size(); ++x) g[x] += e[x] * inv;
                }
            }
            nn::adamw_step(params, state, lr);
            ++result.steps;
        }
        for (const nn::Parameter* p : params) {
            if (!p->value.all_finite()) {
                throw NumericError("train: parameter '" + p->name + "' became non-finite at epoch " + std::to_string(epoch));
            }
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(data.size()));
        if (on_epoch) on_epoch(epoch, result.epoch_loss.back());
    }
    return result;
}

double mean_loss(const Head& head, const std::vector<Example>& data) {
    if (data.empty()) throw InvalidArgument("mean_loss: empty dataset");
    double total = 0.0;
    for (const Example& ex : data) {
        nn::Tape t;
        total += t.value(nn::cross_entropy(t, head.forward(t, ex.inputs), class_index(ex.label)))(0, 0);
    }
    return total / static_cast<double>(data.size());
}

}  // namespace veracity::verdict
