#include "dopamine/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace dopamine {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << header << '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::uint64_t param_checksum(const NetworkState& net) {
    std::uint64_t h = 14695981039346656037ull;  // FNV-1a offset basis
    auto mix = [&h](const void* data, size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;
        }
    };
    for (const auto& p : net.params)
        mix(p.w.data(), static_cast<size_t>(p.w.size()) * sizeof(double));
    return h;
}

namespace {

constexpr char kMagic[8] = {'D', 'P', 'R', 'M', '0', '0', '0', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t get_u64(std::istream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

void put_string(std::ostream& out, const std::string& s) {
    put_u64(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
    const auto len = get_u64(in);
    std::string s(len, '\0');
    in.read(s.data(), static_cast<std::streamsize>(len));
    return s;
}

}  // namespace

void save_params(const std::filesystem::path& path, const NetworkState& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(kMagic, sizeof kMagic);
    out.put(net.is_rnn() ? 1 : 0);
    if (net.is_rnn()) {
        const auto& s = net.rnn_spec();
        put_u64(out, static_cast<std::uint64_t>(s.input_dim));
        put_u64(out, static_cast<std::uint64_t>(s.hidden_dim));
        put_u64(out, static_cast<std::uint64_t>(s.output_dim));
        out.put(s.use_bias ? 1 : 0);
    } else {
        const auto& s = net.mlp_spec();
        put_u64(out, s.layer_dims.size());
        for (int d : s.layer_dims) put_u64(out, static_cast<std::uint64_t>(d));
        for (uint8_t b : s.use_bias) out.put(static_cast<char>(b));
        out.put(static_cast<char>(s.head));
    }
    put_u64(out, net.params.size());
    for (const auto& p : net.params) {
        put_string(out, p.name);
        out.put(static_cast<char>(p.role));
        put_u64(out, static_cast<std::uint64_t>(p.w.rows()));
        put_u64(out, static_cast<std::uint64_t>(p.w.cols()));
        out.write(reinterpret_cast<const char*>(p.w.data()),
                  static_cast<std::streamsize>(p.w.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

NetworkState load_params(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("not a params file: " + path.string());

    NetworkState net;
    const int is_rnn = in.get();
    if (is_rnn) {
        RnnSpec s;
        s.input_dim = static_cast<int>(get_u64(in));
        s.hidden_dim = static_cast<int>(get_u64(in));
        s.output_dim = static_cast<int>(get_u64(in));
        s.use_bias = in.get() != 0;
        net.spec = s;
    } else {
        MlpSpec s;
        const auto n_dims = get_u64(in);
        s.layer_dims.resize(n_dims);
        for (auto& d : s.layer_dims) d = static_cast<int>(get_u64(in));
        s.use_bias.resize(n_dims - 1);
        for (auto& b : s.use_bias) b = static_cast<uint8_t>(in.get());
        s.head = static_cast<HeadKind>(in.get());
        net.spec = s;
    }
    const auto n_params = get_u64(in);
    for (std::uint64_t i = 0; i < n_params; ++i) {
        ParamMatrix p;
        p.name = get_string(in);
        p.role = static_cast<ParamRole>(in.get());
        const auto rows = get_u64(in);
        const auto cols = get_u64(in);
        p.w.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        in.read(reinterpret_cast<char*>(p.w.data()),
                static_cast<std::streamsize>(p.w.size() * sizeof(double)));
        net.params.push_back(std::move(p));
    }
    if (!in) throw std::runtime_error("truncated params file: " + path.string());
    net.validate();
    return net;
}

}  // namespace dopamine
