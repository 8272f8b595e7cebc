#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "ricbox/errors.hpp"
#include "ricbox/mlp.hpp"

namespace ricbox {

// Model checkpoint file, little-endian regardless of host:
//   magic "RLCK" | u32 version (1) | u32 layer_count |
//   per layer: u32 rows | u32 cols | rows*cols f64 weights | cols f64 biases
namespace checkpoint_detail {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f64(std::vector<std::uint8_t>& out, double d) {
    const auto bits = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }

    void bytes(char* out, std::size_t n) {
        need(n);
        std::memcpy(out, data_ + pos_, n);
        pos_ += n;
    }

    bool at_end() const { return pos_ == size_; }

private:
    void need(std::size_t n) {
        if (pos_ + n > size_) throw io_error("checkpoint truncated");
    }
    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

} // namespace checkpoint_detail

inline std::vector<std::uint8_t> checkpoint_bytes(const MlpParams& params) {
    using namespace checkpoint_detail;
    std::vector<std::uint8_t> out;
    out.insert(out.end(), {'R', 'L', 'C', 'K'});
    put_u32(out, 1);
    put_u32(out, static_cast<std::uint32_t>(params.layer_count()));
    for (std::size_t l = 0; l < params.layer_count(); ++l) {
        put_u32(out, static_cast<std::uint32_t>(params.weights[l].rows));
        put_u32(out, static_cast<std::uint32_t>(params.weights[l].cols));
        for (double v : params.weights[l].data) put_f64(out, v);
        for (double v : params.biases[l]) put_f64(out, v);
    }
    return out;
}

inline MlpParams params_from_checkpoint_bytes(const std::vector<std::uint8_t>& bytes) {
    using namespace checkpoint_detail;
    Reader r(bytes.data(), bytes.size());
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, "RLCK", 4) != 0) throw io_error("checkpoint: bad magic");
    const std::uint32_t version = r.u32();
    if (version != 1) throw io_error("checkpoint: unsupported version " + std::to_string(version));
    const std::uint32_t layers = r.u32();
    if (layers == 0) throw io_error("checkpoint: zero layers");
    MlpParams p;
    for (std::uint32_t l = 0; l < layers; ++l) {
        const std::uint32_t rows = r.u32();
        const std::uint32_t cols = r.u32();
        if (rows == 0 || cols == 0) throw io_error("checkpoint: zero-sized layer");
        Matrix w(rows, cols);
        for (double& v : w.data) v = r.f64();
        std::vector<double> b(cols);
        for (double& v : b) v = r.f64();
        p.weights.push_back(std::move(w));
        p.biases.push_back(std::move(b));
    }
    if (!r.at_end()) throw io_error("checkpoint: trailing bytes");
    for (std::size_t l = 1; l < p.weights.size(); ++l)
        if (p.weights[l].rows != p.weights[l - 1].cols)
            throw io_error("checkpoint: layer shapes do not chain");
    return p;
}

inline void save_checkpoint(const MlpParams& params, const std::string& path) {
    const auto bytes = checkpoint_bytes(params);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open checkpoint for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("short write to checkpoint: " + path);
}

inline MlpParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open checkpoint: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return params_from_checkpoint_bytes(bytes);
}

} // namespace ricbox
