#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "veracity/nn/tape.hpp"
#include "veracity/verdict/inputs.hpp"

namespace veracity::verdict {

enum class HeadKind { NliSan, NliGraph, Nli, NliSent, NliPSent, NliGraphAbl };

std::string_view to_string(HeadKind kind);
HeadKind parse_head_kind(std::string_view text);
bool is_graph_head(HeadKind kind);

struct HeadConfig {
    HeadKind kind = HeadKind::NliSan;
    std::size_t encoder_dim = 1024;
    // Pairs per claim N (SAN, NLI, Sent), pairs averaged (PSent), or evidence nodes (graph heads).
    std::size_t pairs = 5;
    std::size_t hidden = 50;
    std::size_t gcn_channels = 50;
    bool gcn_relu = true;
    double graph_threshold = 0.9;

    static HeadConfig defaults(HeadKind kind, std::size_t encoder_dim = 1024);
    void validate() const;
    nlohmann::json to_json() const;
    static HeadConfig from_json(const nlohmann::json& j);
};

class Head {
public:
    explicit Head(HeadConfig config);
    virtual ~Head() = default;
    Head(const Head&) = delete;
    Head& operator=(const Head&) = delete;

    const HeadConfig& config() const { return config_; }
    HeadKind kind() const { return config_.kind; }

    // 1 x 2 distribution over (False, True).
    virtual nn::Var forward(nn::Tape& t, const ClaimInputs& in) const = 0;

    std::array<double, 2> predict_proba(const ClaimInputs& in) const;
    corpus::Label predict(const ClaimInputs& in) const;

    std::vector<nn::Parameter*> parameters();
    std::vector<const nn::Parameter*> parameters() const;

    // Glorot-uniform weights, zero biases.
    void initialize(std::uint64_t seed);

    void save(const std::filesystem::path& path, nlohmann::json metadata = nlohmann::json::object()) const;

protected:
    nn::Parameter& add_parameter(std::string name, std::size_t rows, std::size_t cols, bool bias);
    void add_classifier(std::size_t input_dim);
    // MLP with one ReLU hidden layer, then softmax.
    nn::Var classify(nn::Tape& t, nn::Var features) const;

private:
    HeadConfig config_;
    std::deque<nn::Parameter> params_;
    std::vector<bool> is_bias_;
    const nn::Parameter* w1_ = nullptr;
    const nn::Parameter* b1_ = nullptr;
    const nn::Parameter* w2_ = nullptr;
    const nn::Parameter* b2_ = nullptr;
};

std::unique_ptr<Head> make_head(const HeadConfig& config, std::uint64_t seed);

// Returns the head and the checkpoint metadata.
std::pair<std::unique_ptr<Head>, nlohmann::json> load_head(const std::filesystem::path& path);

}  // namespace veracity::verdict
