#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "veracity/corpus/records.hpp"
#include "veracity/verdict/train.hpp"

namespace veracity::verdict {

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// per_class[0] is False, per_class[1] is True.
struct ClassificationMetrics {
    std::array<ClassMetrics, 2> per_class;
    double macro_f1 = 0.0;
    double accuracy = 0.0;
};

// A class never predicted has precision 0; F1 is 0 when P + R = 0.
ClassificationMetrics classification_metrics(const std::vector<corpus::Label>& gold,
                                             const std::vector<corpus::Label>& pred);

// Fraction of claims whose relevant item has a 1-based rank <= k.
double ap_at_k(const std::vector<std::optional<std::size_t>>& ranks, std::size_t k);

// Fold of each id in [0, k): ids sorted by SHA-256(seed, id), then dealt round-robin.
std::vector<std::size_t> assign_folds(const std::vector<std::string>& ids, std::size_t k, std::uint64_t seed);

struct FoldResult {
    std::size_t fold = 0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    ClassificationMetrics metrics;
    std::vector<double> epoch_loss;
};

struct MetricsReport {
    std::string head;
    std::vector<FoldResult> folds;
    ClassificationMetrics mean;  // unweighted mean over folds
};

using HeadFactory = std::function<std::unique_ptr<Head>(std::size_t fold)>;

MetricsReport kfold_evaluate(const std::vector<Example>& data, std::size_t k, const HeadFactory& factory,
                             const TrainConfig& config, std::uint64_t seed);

nlohmann::json to_json(const ClassificationMetrics& m);
nlohmann::json to_json(const MetricsReport& report);

}  // namespace veracity::verdict
