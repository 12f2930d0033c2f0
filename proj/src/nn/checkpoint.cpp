#include "veracity/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>

#include "veracity/binary_io.hpp"
#include "veracity/error.hpp"

namespace veracity::nn {

namespace {
constexpr char kMagic[8] = {'V', 'R', 'C', 'Y', 'C', 'K', 'P', 'T'};
}

void save_checkpoint(const std::filesystem::path& path, const std::vector<const Parameter*>& params,
                     const nlohmann::json& metadata) {
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write checkpoint " + tmp.string());
        out.write(kMagic, sizeof(kMagic));
        binary::write<std::uint32_t>(out, kCheckpointVersion);
        binary::write_string(out, metadata.dump());
        binary::write<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
        for (const Parameter* p : params) {
            binary::write_string(out, p->name);
            binary::write<std::uint32_t>(out, 2);
            binary::write<std::uint64_t>(out, p->value.rows());
            binary::write<std::uint64_t>(out, p->value.cols());
            for (double v : p->value.values()) binary::write<double>(out, v);
        }
        if (!out) throw Error("failed writing checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open checkpoint " + path.string());
    char magic[sizeof(kMagic)];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw ParseError(path.string() + ": not a checkpoint file");
    }
    const auto version = binary::read<std::uint32_t>(in);
    if (version != kCheckpointVersion) {
        throw ParseError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
    }
    Checkpoint ckpt;
    try {
        ckpt.metadata = nlohmann::json::parse(binary::read_string(in));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": bad checkpoint metadata: " + e.what());
    }
    const auto count = binary::read<std::uint32_t>(in);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::string name = binary::read_string(in);
        const auto rank = binary::read<std::uint32_t>(in);
        if (rank != 2) throw ParseError(path.string() + ": parameter '" + name + "' has rank " + std::to_string(rank));
        const auto rows = binary::read<std::uint64_t>(in);
        const auto cols = binary::read<std::uint64_t>(in);
        if (rows == 0 || cols == 0 || rows * cols > (std::uint64_t{1} << 32)) {
            throw ParseError(path.string() + ": parameter '" + name + "' has invalid shape");
        }
        std::vector<double> values(rows * cols);
        for (auto& v : values) v = binary::read<double>(in);
        ckpt.params.emplace_back(std::move(name), Tensor(rows, cols, std::move(values)));
        if (!ckpt.params.back().value.all_finite()) {
            throw ParseError(path.string() + ": parameter '" + ckpt.params.back().name + "' has non-finite values");
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) throw ParseError(path.string() + ": trailing bytes");
    return ckpt;
}

void restore_parameters(const Checkpoint& ckpt, const std::vector<Parameter*>& targets) {
    std::map<std::string, const Parameter*> by_name;
    for (const Parameter& p : ckpt.params) by_name[p.name] = &p;
    for (Parameter* t : targets) {
        auto it = by_name.find(t->name);
        if (it == by_name.end()) throw InvalidArgument("checkpoint lacks parameter '" + t->name + "'");
        if (!it->second->value.same_shape(t->value)) {
            throw ShapeError("checkpoint parameter '" + t->name + "' is " + shape_string(it->second->value) +
                             ", expected " + shape_string(t->value));
        }
        t->value = it->second->value;
        t->zero_grad();
    }
}

}  // namespace veracity::nn
