#include "relaxinv/formats.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "relaxinv/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "payloads are little-endian; big-endian hosts are not supported");

namespace relaxinv {

namespace {

constexpr const char* kSignalTag = "relaxinv-signal";
constexpr const char* kMapTag = "relaxinv-map";

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write file: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DomainError("short write: " + path.string());
}

void append_doubles(std::string& bytes, const Eigen::VectorXd& v) {
    const std::size_t off = bytes.size();
    bytes.resize(off + sizeof(double) * static_cast<std::size_t>(v.size()));
    std::memcpy(bytes.data() + off, v.data(), sizeof(double) * static_cast<std::size_t>(v.size()));
}

// Header scanner that tracks byte offsets for error reporting.
class HeaderScanner {
  public:
    HeaderScanner(const std::string& bytes, const char* tag, int expected_version)
        : bytes_(bytes) {
        std::string word = next_token(' ');
        if (word != tag)
            throw ParseError("expected '" + std::string(tag) + "' header, got '" + word + "'",
                             line_start_);
        const std::string ver = next_token('\n');
        int v = -1;
        auto [p, ec] = std::from_chars(ver.data(), ver.data() + ver.size(), v);
        if (ec != std::errc() || p != ver.data() + ver.size())
            throw ParseError("malformed version field '" + ver + "'", line_start_);
        if (v != expected_version)
            throw ParseError("unsupported " + std::string(tag) + " version " + std::to_string(v) +
                                 " (this build reads version " +
                                 std::to_string(expected_version) + ")",
                             line_start_);
    }

    // Reads "key value" lines until the "data" line; returns the key map.
    std::map<std::string, std::string> read_fields() {
        std::map<std::string, std::string> fields;
        while (true) {
            line_start_ = pos_;
            if (pos_ >= bytes_.size()) throw ParseError("header ended before 'data' line", pos_);
            const std::string key = next_token(' ', '\n');
            if (key == "data") return fields;
            const std::string value = next_token('\n');
            if (key.empty() || value.empty())
                throw ParseError("malformed header line", line_start_);
            if (!fields.emplace(key, value).second)
                throw ParseError("duplicate header key '" + key + "'", line_start_);
        }
    }

    std::size_t payload_offset() const { return pos_; }

    Eigen::VectorXd read_payload(Eigen::Index count) {
        const std::size_t need = sizeof(double) * static_cast<std::size_t>(count);
        if (bytes_.size() - pos_ < need)
            throw ParseError("payload truncated: need " + std::to_string(need) +
                                 " bytes, have " + std::to_string(bytes_.size() - pos_),
                             pos_);
        Eigen::VectorXd v(count);
        std::memcpy(v.data(), bytes_.data() + pos_, need);
        pos_ += need;
        return v;
    }

    void expect_end() const {
        if (pos_ != bytes_.size())
            throw ParseError("trailing bytes after payload", pos_);
    }

  private:
    std::string next_token(char delim, char alt_delim = '\0') {
        std::size_t end = pos_;
        while (end < bytes_.size() && bytes_[end] != delim &&
               (alt_delim == '\0' || bytes_[end] != alt_delim))
            ++end;
        if (end >= bytes_.size()) throw ParseError("unterminated header line", pos_);
        std::string tok = bytes_.substr(pos_, end - pos_);
        pos_ = end + 1;
        return tok;
    }

    const std::string& bytes_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
};

const std::string& require(const std::map<std::string, std::string>& fields,
                           const std::string& key, std::size_t offset) {
    auto it = fields.find(key);
    if (it == fields.end()) throw ParseError("missing header field '" + key + "'", offset);
    return it->second;
}

long parse_long(const std::string& v, const char* what, std::size_t offset) {
    long out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ParseError("malformed " + std::string(what) + " '" + v + "'", offset);
    return out;
}

double parse_double(const std::string& v, const char* what, std::size_t offset) {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ParseError("malformed " + std::string(what) + " '" + v + "'", offset);
    return out;
}

std::string spacing_name(Spacing s) {
    return s == Spacing::logarithmic ? "logarithmic" : "linear";
}

Spacing spacing_from_name(const std::string& name) {
    if (name == "logarithmic") return Spacing::logarithmic;
    if (name == "linear") return Spacing::linear;
    throw ParseError("unknown spacing '" + name + "'", 0);
}

std::ofstream open_text(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write file: " + path.string());
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::string kernel_kind_name(KernelKind k) {
    return k == KernelKind::ir_cpmg ? "ir-cpmg" : "cpmg-cpmg";
}

KernelKind kernel_kind_from_name(const std::string& name) {
    if (name == "ir-cpmg") return KernelKind::ir_cpmg;
    if (name == "cpmg-cpmg") return KernelKind::cpmg_cpmg;
    throw DomainError("unknown kernel kind: " + name);
}

void write_signal(const std::filesystem::path& path, const SignalFile& sig) {
    if (sig.s.size() != sig.t1.size() * sig.t2.size())
        throw ShapeError("write_signal: payload length does not match grids");
    std::string bytes;
    bytes += std::string(kSignalTag) + " " + std::to_string(kSignalFormatVersion) + "\n";
    bytes += "kind " + kernel_kind_name(sig.kind) + "\n";
    bytes += "m1 " + std::to_string(sig.t1.size()) + "\n";
    bytes += "m2 " + std::to_string(sig.t2.size()) + "\n";
    bytes += "t1-spacing " + spacing_name(sig.t1.spacing) + "\n";
    bytes += "t2-spacing " + spacing_name(sig.t2.spacing) + "\n";
    bytes += "delta " + format_double(sig.delta) + "\n";
    bytes += "seed " + std::to_string(sig.seed) + "\n";
    bytes += "data\n";
    append_doubles(bytes, sig.t1.values);
    append_doubles(bytes, sig.t2.values);
    append_doubles(bytes, sig.s);
    write_file(path, bytes);
}

SignalFile read_signal(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    HeaderScanner sc(bytes, kSignalTag, kSignalFormatVersion);
    const auto fields = sc.read_fields();
    const std::size_t off = sc.payload_offset();

    SignalFile sig;
    sig.kind = kernel_kind_from_name(require(fields, "kind", off));
    const long m1 = parse_long(require(fields, "m1", off), "m1", off);
    const long m2 = parse_long(require(fields, "m2", off), "m2", off);
    if (m1 < 1 || m2 < 1) throw ParseError("header dimensions must be positive", off);
    if (m1 > (1L << 20) || m2 > (1L << 20))
        throw ParseError("header dimensions unreasonably large", off);
    sig.delta = parse_double(require(fields, "delta", off), "delta", off);
    sig.seed = static_cast<std::uint64_t>(parse_long(require(fields, "seed", off), "seed", off));
    const Spacing sp1 = spacing_from_name(require(fields, "t1-spacing", off));
    const Spacing sp2 = spacing_from_name(require(fields, "t2-spacing", off));

    sig.t1 = time_grid_from(sc.read_payload(m1), sp1);
    sig.t2 = time_grid_from(sc.read_payload(m2), sp2);
    sig.s = sc.read_payload(m1 * m2);
    sc.expect_end();
    return sig;
}

void write_map(const std::filesystem::path& path, const MapFile& map) {
    if (map.f.size() != map.T1.size() * map.T2.size())
        throw ShapeError("write_map: payload length does not match grids");
    std::string bytes;
    bytes += std::string(kMapTag) + " " + std::to_string(kMapFormatVersion) + "\n";
    bytes += "n1 " + std::to_string(map.T1.size()) + "\n";
    bytes += "n2 " + std::to_string(map.T2.size()) + "\n";
    bytes += "data\n";
    append_doubles(bytes, map.T1.values);
    append_doubles(bytes, map.T2.values);
    append_doubles(bytes, map.f);
    write_file(path, bytes);
}

MapFile read_map(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    HeaderScanner sc(bytes, kMapTag, kMapFormatVersion);
    const auto fields = sc.read_fields();
    const std::size_t off = sc.payload_offset();

    const long n1 = parse_long(require(fields, "n1", off), "n1", off);
    const long n2 = parse_long(require(fields, "n2", off), "n2", off);
    if (n1 < 1 || n2 < 1) throw ParseError("header dimensions must be positive", off);
    if (n1 > (1L << 20) || n2 > (1L << 20))
        throw ParseError("header dimensions unreasonably large", off);

    MapFile map;
    map.T1 = relax_grid_from(sc.read_payload(n1));
    map.T2 = relax_grid_from(sc.read_payload(n2));
    map.f = sc.read_payload(n1 * n2);
    sc.expect_end();
    return map;
}

void write_diagnostics_csv(const std::filesystem::path& path, const SolveReport& report) {
    auto out = open_text(path);
    out << "k,eps2,alpha,xi,lambda_min,lambda_max,lambda_mean,inner_iters\n";
    for (const PenaltySnapshot& sn : report.snapshots) {
        out << sn.k << ',' << format_double(sn.eps2) << ',' << format_double(sn.alpha) << ','
            << format_double(sn.xi) << ',' << format_double(sn.lambda_min) << ','
            << format_double(sn.lambda_max) << ',' << format_double(sn.lambda_mean) << ','
            << sn.inner_iters << '\n';
    }
}

void write_objective_csv(const std::filesystem::path& path, const SolveReport& report) {
    auto out = open_text(path);
    out << "outer,inner,objective\n";
    std::size_t pos = 0;
    for (std::size_t k = 0; k < report.inner_iters_per_outer.size(); ++k) {
        // history entry 0 of each outer is the warm-start objective
        const std::size_t count = static_cast<std::size_t>(report.inner_iters_per_outer[k]) + 1;
        for (std::size_t j = 0; j < count && pos < report.objective_history.size(); ++j, ++pos)
            out << k << ',' << j << ',' << format_double(report.objective_history[pos]) << '\n';
    }
}

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<RealizationMetrics>& rows) {
    auto out = open_text(path);
    out << "method,seed,erel2,rmsd\n";
    for (const RealizationMetrics& r : rows)
        out << r.method << ',' << r.seed << ',' << (r.has_truth ? format_double(r.erel2) : "")
            << ',' << format_double(r.rmsd) << '\n';
}

void write_contour_csv(const std::filesystem::path& path, const MapFile& map) {
    auto out = open_text(path);
    out << "T1_ms,T2_ms,F\n";
    const Eigen::Index n1 = map.T1.size(), n2 = map.T2.size();
    Eigen::Map<const Eigen::MatrixXd> F(map.f.data(), n1, n2);
    for (Eigen::Index j = 0; j < n2; ++j)
        for (Eigen::Index i = 0; i < n1; ++i)
            out << format_double(map.T1.values[i]) << ',' << format_double(map.T2.values[j])
                << ',' << format_double(F(i, j)) << '\n';
}

void write_projection_csv(const std::filesystem::path& t1_path,
                          const std::filesystem::path& t2_path, const MapFile& map) {
    const Eigen::Index n1 = map.T1.size(), n2 = map.T2.size();
    Eigen::Map<const Eigen::MatrixXd> F(map.f.data(), n1, n2);
    {
        auto out = open_text(t1_path);
        out << "T1_ms,sum\n";
        const Eigen::VectorXd proj = F.rowwise().sum();
        for (Eigen::Index i = 0; i < n1; ++i)
            out << format_double(map.T1.values[i]) << ',' << format_double(proj[i]) << '\n';
    }
    {
        auto out = open_text(t2_path);
        out << "T2_ms,sum\n";
        const Eigen::VectorXd proj = F.colwise().sum();
        for (Eigen::Index j = 0; j < n2; ++j)
            out << format_double(map.T2.values[j]) << ',' << format_double(proj[j]) << '\n';
    }
}

void write_table1_csv(const std::filesystem::path& path, const std::vector<MetricRow>& rows) {
    auto out = open_text(path);
    out << "method,n_realizations,erel2,rmsd,time_s\n";
    for (const MetricRow& r : rows) {
        out << r.method << ',' << r.n_realizations << ',' << format_double(r.erel2) << ','
            << format_double(r.rmsd) << ',' << format_double(r.wall_time) << '\n';
    }
}

void write_table2_csv(const std::filesystem::path& path, const std::vector<MetricRow>& rows) {
    auto out = open_text(path);
    out << "method,pal_percent,peg_percent\n";
    if (rows.empty()) return;
    double err_min = rows.front().erel2, time_max = rows.front().wall_time;
    for (const MetricRow& r : rows) {
        err_min = std::min(err_min, r.erel2);
        time_max = std::max(time_max, r.wall_time);
    }
    for (const MetricRow& r : rows)
        out << r.method << ',' << format_double(pal(r.erel2, err_min)) << ','
            << format_double(peg(r.wall_time, time_max)) << '\n';
}

}  // namespace relaxinv
