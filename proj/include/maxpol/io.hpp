#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "maxpol/diffmatrix.hpp"
#include "maxpol/errors.hpp"
#include "maxpol/experiments.hpp"
#include "maxpol/kernels.hpp"
#include "maxpol/response.hpp"
#include "maxpol/spectral.hpp"
#include "maxpol/tensorops.hpp"

namespace maxpol::io {

/// Shortest round-trip decimal form of a double.
inline std::string fmt(double v) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw FormatError("cannot format double");
    return {buf.data(), end};
}

/// Writes `bytes` to a sibling temporary file, then renames it over `path`.
inline void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw FormatError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw FormatError("cannot rename " + tmp.string() + ": " + ec.message());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- CSV ------------------------------------------------------------------

inline std::string kernel_csv(const Kernel& k) {
    std::string s = "offset_num,offset_den,coeff_num,coeff_den,coeff_f64\n";
    for (std::size_t i = 0; i < k.offsets.size(); ++i) {
        s += k.offsets[i].num().str() + ',' + k.offsets[i].den().str() + ',';
        s += k.coeffs[i].num().str() + ',' + k.coeffs[i].den().str() + ',';
        s += fmt(k.coeffs_f64[i]) + '\n';
    }
    return s;
}

inline std::string response_csv(const FrequencyResponse& r) {
    std::string s = "omega,re,im,abs\n";
    for (std::size_t i = 0; i < r.omegas.size(); ++i) {
        const auto z = r.values[i];
        s += fmt(r.omegas[i]) + ',' + fmt(z.real()) + ',' + fmt(z.imag()) + ',' + fmt(std::abs(z)) + '\n';
    }
    return s;
}

inline std::string triplet_csv(const DerivMatrix& D) {
    std::string s = "# " + std::to_string(D.size()) + ' ' + std::to_string(D.size()) + ' ' +
                    std::to_string(D.size()) + ' ' + std::string(to_string(D.scheme())) + ' ' +
                    std::to_string(D.order()) + ' ' + std::to_string(D.half_length()) + ' ' +
                    std::to_string(D.accuracy()) + '\n';
    s += "row,col,value\n";
    for (const auto& t : D.entries())
        s += std::to_string(t.row) + ',' + std::to_string(t.col) + ',' + fmt(t.value) + '\n';
    return s;
}

inline std::string monte_carlo_csv(const std::vector<MonteCarloRow>& rows) {
    std::string s = "harmonic,sigma,scheme,l,P,interior_nrmse,boundary_nrmse,trials\n";
    for (const auto& r : rows)
        s += fmt(r.harmonic) + ',' + fmt(r.sigma) + ',' + std::string(to_string(r.scheme)) + ',' +
             std::to_string(r.l) + ',' + std::to_string(r.P) + ',' + fmt(r.interior_nrmse) + ',' +
             fmt(r.boundary_nrmse) + ',' + std::to_string(r.trials) + '\n';
    return s;
}

// ---- JSON -----------------------------------------------------------------

inline nlohmann::ordered_json spectral_json(const SpectralReport& r) {
    nlohmann::ordered_json j;
    j["params"] = {{"scheme", to_string(r.params.scheme)},
                   {"n", r.params.n},
                   {"l", r.params.l},
                   {"N", r.params.N},
                   {"P", r.params.P},
                   {"precision", to_string(r.params.precision)}};
    auto ev = nlohmann::ordered_json::array();
    for (const auto& z : r.eigenvalues) ev.push_back({z.real(), z.imag()});
    j["eigenvalues"] = std::move(ev);
    j["max_real"] = r.max_real;
    j["spectral_radius"] = r.spectral_radius;
    j["case"] = to_string(r.case_label);
    return j;
}

// ---- MXG1 / MXT1 ----------------------------------------------------------

namespace detail {

inline void put_u32(std::string& s, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) s += static_cast<char>((v >> (8 * b)) & 0xFFu);
}

inline void put_f64(std::string& s, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) s += static_cast<char>((bits >> (8 * b)) & 0xFFu);
}

class Reader {
public:
    explicit Reader(const std::string& bytes) : bytes_(bytes) {}

    void expect_magic(std::string_view magic) {
        need(magic.size());
        if (bytes_.compare(pos_, magic.size(), magic) != 0)
            throw FormatError("bad magic, expected " + std::string(magic));
        pos_ += magic.size();
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b) v |= std::uint32_t{static_cast<unsigned char>(bytes_[pos_++])} << (8 * b);
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b) v |= std::uint64_t{static_cast<unsigned char>(bytes_[pos_++])} << (8 * b);
        return std::bit_cast<double>(v);
    }
    void expect_end() const {
        if (pos_ != bytes_.size()) throw FormatError("trailing bytes after payload");
    }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw FormatError("truncated file");
    }
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

inline std::uint32_t checked_u32(std::size_t v) {
    if (v > 0xFFFFFFFFu) throw FormatError("dimension does not fit in u32");
    return static_cast<std::uint32_t>(v);
}

}  // namespace detail

inline std::string encode_mxg1(const Grid& g) {
    std::string s = "MXG1";
    s.reserve(12 + 8 * g.size());
    detail::put_u32(s, detail::checked_u32(g.rows()));
    detail::put_u32(s, detail::checked_u32(g.cols()));
    for (double v : g.data()) detail::put_f64(s, v);
    return s;
}

inline Grid decode_mxg1(const std::string& bytes) {
    detail::Reader r(bytes);
    r.expect_magic("MXG1");
    const std::size_t rows = r.u32();
    const std::size_t cols = r.u32();
    if (bytes.size() != 12 + 8 * rows * cols) throw FormatError("MXG1 payload length does not match dims");
    Grid g(rows, cols);
    for (double& v : g.data()) v = r.f64();
    r.expect_end();
    return g;
}

inline std::string encode_mxt1(const Tensor& t) {
    std::string s = "MXT1";
    detail::put_u32(s, detail::checked_u32(t.ndims()));
    for (auto d : t.dims()) detail::put_u32(s, detail::checked_u32(d));
    for (double v : t.data()) detail::put_f64(s, v);
    return s;
}

inline Tensor decode_mxt1(const std::string& bytes) {
    detail::Reader r(bytes);
    r.expect_magic("MXT1");
    const std::uint32_t nd = r.u32();
    std::vector<std::size_t> dims(nd);
    std::size_t count = 1;
    for (auto& d : dims) {
        d = r.u32();
        count *= d;
    }
    if (bytes.size() != 8 + 4 * std::size_t{nd} + 8 * count) throw FormatError("MXT1 payload length does not match dims");
    std::vector<double> data(count);
    for (double& v : data) v = r.f64();
    r.expect_end();
    return Tensor(std::move(dims), std::move(data));
}

inline void write_mxg1(const std::filesystem::path& p, const Grid& g) { write_atomic(p, encode_mxg1(g)); }
inline Grid read_mxg1(const std::filesystem::path& p) { return decode_mxg1(read_file(p)); }
inline void write_mxt1(const std::filesystem::path& p, const Tensor& t) { write_atomic(p, encode_mxt1(t)); }
inline Tensor read_mxt1(const std::filesystem::path& p) { return decode_mxt1(read_file(p)); }

// ---- PGM ------------------------------------------------------------------

/// Binary PGM (P5), 8 bit, linear min-max scaling; a constant grid maps to 0.
inline std::string encode_pgm(const Grid& g) {
    std::string s = "P5\n" + std::to_string(g.cols()) + ' ' + std::to_string(g.rows()) + "\n255\n";
    if (g.size() == 0) return s;
    const auto [lo, hi] = std::minmax_element(g.data().begin(), g.data().end());
    const double range = *hi - *lo;
    for (double v : g.data()) {
        const double t = range > 0.0 ? (v - *lo) / range : 0.0;
        s += static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t)));
    }
    return s;
}

}  // namespace maxpol::io
