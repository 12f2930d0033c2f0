#include "veracity/verdict/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "veracity/encoder/codec.hpp"
#include "veracity/error.hpp"

namespace veracity::verdict {

ClassificationMetrics classification_metrics(const std::vector<corpus::Label>& gold,
                                             const std::vector<corpus::Label>& pred) {
    if (gold.size() != pred.size()) {
        throw InvalidArgument("classification_metrics: " + std::to_string(gold.size()) + " gold vs " +
                              std::to_string(pred.size()) + " predicted labels");
    }
    ClassificationMetrics m;
    std::size_t correct = 0;
    for (std::size_t c = 0; c < 2; ++c) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            const bool g = class_index(gold[i]) == c;
            const bool p = class_index(pred[i]) == c;
            tp += g && p;
            fp += !g && p;
            fn += g && !p;
        }
        ClassMetrics& cm = m.per_class[c];
        cm.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
        cm.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
        cm.f1 = cm.precision + cm.recall == 0.0 ? 0.0 : 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
        correct += tp;
    }
    m.macro_f1 = (m.per_class[0].f1 + m.per_class[1].f1) / 2.0;
    m.accuracy = gold.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(gold.size());
    return m;
}

double ap_at_k(const std::vector<std::optional<std::size_t>>& ranks, std::size_t k) {
    if (ranks.empty()) throw InvalidArgument("ap_at_k: no claims");
    if (k == 0) throw InvalidArgument("ap_at_k: k must be >= 1");
    std::size_t hits = 0;
    for (const auto& r : ranks) {
        if (r && *r == 0) throw InvalidArgument("ap_at_k: ranks are 1-based");
        hits += r && *r <= k;
    }
    return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

std::vector<std::size_t> assign_folds(const std::vector<std::string>& ids, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw InvalidArgument("kfold: k must be >= 2");
    if (k > ids.size()) {
        throw InvalidArgument("kfold: k=" + std::to_string(k) + " exceeds " + std::to_string(ids.size()) + " items");
    }
    std::vector<std::pair<std::string, std::size_t>> keyed;
    keyed.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        keyed.emplace_back(encoder::sha256_hex(std::to_string(seed) + '\x1f' + ids[i]) + ids[i], i);
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 1; i < keyed.size(); ++i) {
        if (ids[keyed[i].second] == ids[keyed[i - 1].second]) {
            throw InvalidArgument("kfold: duplicate item id '" + ids[keyed[i].second] + "'");
        }
    }
    std::vector<std::size_t> fold(ids.size());
    for (std::size_t pos = 0; pos < keyed.size(); ++pos) fold[keyed[pos].second] = pos % k;
    return fold;
}

MetricsReport kfold_evaluate(const std::vector<Example>& data, std::size_t k, const HeadFactory& factory,
                             const TrainConfig& config, std::uint64_t seed) {
    std::vector<std::string> ids;
    for (const Example& e : data) ids.push_back(e.inputs.claim_id);
    const std::vector<std::size_t> fold_of = assign_folds(ids, k, seed);

    MetricsReport report;
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<Example> train_set;
        std::vector<const Example*> test_set;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (fold_of[i] == f) {
                test_set.push_back(&data[i]);
            } else {
                train_set.push_back(data[i]);
            }
        }
        std::unique_ptr<Head> head = factory(f);
        if (report.head.empty()) report.head = std::string(to_string(head->kind()));
        TrainResult tr = train(*head, train_set, config, seed + 1 + f);

        std::vector<corpus::Label> gold, pred;
        for (const Example* e : test_set) {
            gold.push_back(e->label);
            pred.push_back(head->predict(e->inputs));
        }
        report.folds.push_back({f, train_set.size(), test_set.size(), classification_metrics(gold, pred),
                                std::move(tr.epoch_loss)});
    }

    const double inv = 1.0 / static_cast<double>(k);
    for (const FoldResult& fr : report.folds) {
        for (std::size_t c = 0; c < 2; ++c) {
            report.mean.per_class[c].precision += fr.metrics.per_class[c].precision * inv;
            report.mean.per_class[c].recall += fr.metrics.per_class[c].recall * inv;
            report.mean.per_class[c].f1 += fr.metrics.per_class[c].f1 * inv;
        }
        report.mean.macro_f1 += fr.metrics.macro_f1 * inv;
        report.mean.accuracy += fr.metrics.accuracy * inv;
    }
    return report;
}

nlohmann::json to_json(const ClassificationMetrics& m) {
    auto cls = [](const ClassMetrics& c) {
        return nlohmann::json{{"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}};
    };
    return {{"False", cls(m.per_class[0])}, {"True", cls(m.per_class[1])}, {"macro_f1", m.macro_f1},
            {"accuracy", m.accuracy}};
}

nlohmann::json to_json(const MetricsReport& report) {
    nlohmann::json folds = nlohmann::json::array();
    for (const FoldResult& f : report.folds) {
        folds.push_back({{"fold", f.fold},
                         {"train_size", f.train_size},
                         {"test_size", f.test_size},
                         {"metrics", to_json(f.metrics)},
                         {"final_loss", f.epoch_loss.empty() ? 0.0 : f.epoch_loss.back()}});
    }
    return {{"head", report.head}, {"folds", folds}, {"mean", to_json(report.mean)}};
}

}  // namespace veracity::verdict
