#include "veracity/rerank/scorer.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "veracity/encoder/hashing_backend.hpp"
#include "veracity/error.hpp"

namespace veracity::rerank {

FixtureScorer::FixtureScorer(const std::filesystem::path& path) : name_(path.string()) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open score table " + path.string());
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            const double s = j.at("score").get<double>();
            if (!(s >= 0.0 && s <= 1.0)) throw ParseError("score outside [0,1]");
            table_[{j.at("query").get<std::string>(), j.at("passage").get<std::string>()}] = s;
        } catch (const std::exception& e) {
            throw ParseError("score table " + path.string() + " row " + std::to_string(row) + ": " + e.what());
        }
    }
}

FixtureScorer::FixtureScorer(std::map<std::pair<std::string, std::string>, double> table, std::string name)
    : table_(table.begin(), table.end()), name_(std::move(name)) {}

double FixtureScorer::score(std::string_view query, std::string_view passage) const {
    auto it = table_.find(std::pair{std::string(query), std::string(passage)});
    if (it == table_.end()) throw ServiceError("fixture scorer: no score for pair");
    return it->second;
}

OverlapScorer::OverlapScorer(index::Analyzer analyzer) : analyzer_(std::move(analyzer)) {}

double OverlapScorer::score(std::string_view query, std::string_view passage) const {
    return encoder::term_overlap(analyzer_, query, passage);
}

ServiceScorer::ServiceScorer(std::shared_ptr<encoder::EncoderClient> client, std::string url)
    : client_(std::move(client)), url_(std::move(url)) {
    if (!client_) throw InvalidArgument("service scorer needs an encoder client");
}

double ServiceScorer::score(std::string_view query, std::string_view passage) const {
    return client_->rerank(std::string(query), {std::string(passage)}).front();
}

std::unique_ptr<RelevanceScorer> make_scorer(std::string_view identity,
                                             std::shared_ptr<encoder::EncoderClient> client) {
    if (identity == "overlap") return std::make_unique<OverlapScorer>();
    if (identity.starts_with("fixture:")) {
        return std::make_unique<FixtureScorer>(std::filesystem::path(std::string(identity.substr(8))));
    }
    if (identity.starts_with("service:")) {
        return std::make_unique<ServiceScorer>(std::move(client), std::string(identity.substr(8)));
    }
    throw InvalidArgument("unknown scorer identity '" + std::string(identity) + "'");
}

}  // namespace veracity::rerank
