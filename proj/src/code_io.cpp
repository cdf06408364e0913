#include "nbmr/code_io.hpp"

#include "nbmr/errors.hpp"

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace nbmr {

namespace {

std::uint32_t crc_of(std::string_view bytes) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
                static_cast<uInt>(bytes.size())));
}

std::string hex(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
    return buf;
}

class LineParser {
public:
    explicit LineParser(std::string_view line) : rest_(line) {}

    std::string_view token() {
        while (!rest_.empty() && rest_.front() == ' ')
            rest_.remove_prefix(1);
        std::size_t end = rest_.find(' ');
        std::string_view t = rest_.substr(0, end);
        rest_.remove_prefix(end == std::string_view::npos ? rest_.size() : end);
        return t;
    }

    bool done() {
        while (!rest_.empty() && rest_.front() == ' ')
            rest_.remove_prefix(1);
        return rest_.empty();
    }

private:
    std::string_view rest_;
};

std::uint64_t parse_uint(std::string_view t, int base = 10) {
    if (base == 16) {
        if (t.substr(0, 2) != "0x")
            throw parse_error("expected 0x-prefixed hex value");
        t.remove_prefix(2);
    }
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v, base);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty())
        throw parse_error("bad integer token in code file");
    return v;
}

std::uint64_t parse_kv(std::string_view t, std::string_view key, int base = 10) {
    if (t.substr(0, key.size()) != key || t.size() <= key.size() || t[key.size()] != '=')
        throw parse_error("expected " + std::string(key) + "=<value>");
    return parse_uint(t.substr(key.size() + 1), base);
}

} // namespace

std::string serialize_code(const RepCode& code, const PuncturePattern& pattern) {
    const MotherCode& mother = code.mother();
    std::ostringstream out;
    out << "nbmr-code v1\n";
    out << "m=" << mother.field().m() << " poly=" << hex(mother.field().poly())
        << " N=" << mother.n() << " M=" << mother.checks()
        << " dv=" << mother.d_v() << " dc=" << mother.d_c()
        << " T=" << code.T() << " seed=" << mother.seed() << "\n";
    for (const Edge& e : mother.edges())
        out << "e " << e.check << " " << e.var << " " << hex(e.label) << "\n";
    for (int t = 1; t < code.T(); ++t)
        for (std::uint32_t v = 0; v < mother.n(); ++v)
            out << "r " << t << " " << v << " " << hex(code.coeff(t, v)) << "\n";
    for (std::uint32_t v : pattern)
        out << "p " << v << "\n";
    std::string body = out.str();
    return body + "crc32=" + hex(crc_of(body)) + "\n";
}

std::uint32_t code_checksum(const RepCode& code, const PuncturePattern& pattern) {
    const std::string text = serialize_code(code, pattern);
    const std::size_t pos = text.rfind("crc32=0x");
    return static_cast<std::uint32_t>(parse_uint(
        std::string_view(text).substr(pos + 6, text.size() - pos - 7), 16));
}

void save_code(const std::string& path, const RepCode& code, const PuncturePattern& pattern) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw parse_error("cannot open " + path + " for writing");
    f << serialize_code(code, pattern);
    if (!f.good())
        throw parse_error("short write to " + path);
}

CodeFile parse_code(const std::string& text) {
    const std::size_t crc_pos = text.rfind("crc32=0x");
    if (crc_pos == std::string::npos || text.empty() || text.back() != '\n')
        throw parse_error("code file has no trailing crc32 line");
    std::string_view crc_line(text.data() + crc_pos, text.size() - crc_pos - 1);
    const auto stated = static_cast<std::uint32_t>(parse_kv(crc_line, "crc32", 16));
    const auto actual = crc_of(std::string_view(text).substr(0, crc_pos));
    if (stated != actual)
        throw parse_error("code file checksum mismatch (stated " + hex(stated) +
                          ", computed " + hex(actual) + ")");

    std::istringstream in(text.substr(0, crc_pos));
    std::string line;
    if (!std::getline(in, line) || line != "nbmr-code v1")
        throw parse_error("unsupported code file magic");
    if (!std::getline(in, line))
        throw parse_error("missing code file header");

    LineParser header(line);
    const int m = static_cast<int>(parse_kv(header.token(), "m"));
    const auto poly = parse_kv(header.token(), "poly", 16);
    const auto n = static_cast<std::uint32_t>(parse_kv(header.token(), "N"));
    const auto m_checks = static_cast<std::uint32_t>(parse_kv(header.token(), "M"));
    const int dv = static_cast<int>(parse_kv(header.token(), "dv"));
    const int dc = static_cast<int>(parse_kv(header.token(), "dc"));
    const int t_param = static_cast<int>(parse_kv(header.token(), "T"));
    const auto seed = parse_kv(header.token(), "seed");
    if (!header.done())
        throw parse_error("trailing tokens in code file header");

    Field field(m);
    if (field.poly() != poly)
        throw parse_error("code file primitive polynomial does not match the frozen table");
    if (t_param < 1)
        throw parse_error("code file has T < 1");

    std::vector<Edge> edges;
    std::vector<symbol_t> coeffs(static_cast<std::size_t>(t_param - 1) * n, 0);
    std::vector<bool> coeff_seen(coeffs.size(), false);
    PuncturePattern pattern;
    while (std::getline(in, line)) {
        if (line.empty())
            throw parse_error("blank line in code file");
        LineParser p(line);
        const std::string_view tag = p.token();
        if (tag == "e") {
            const auto c = static_cast<std::uint32_t>(parse_uint(p.token()));
            const auto v = static_cast<std::uint32_t>(parse_uint(p.token()));
            const auto label = static_cast<symbol_t>(parse_uint(p.token(), 16));
            edges.push_back(Edge{c, v, label});
        } else if (tag == "r") {
            const auto t = parse_uint(p.token());
            const auto v = parse_uint(p.token());
            const auto coef = static_cast<symbol_t>(parse_uint(p.token(), 16));
            if (t < 1 || t >= static_cast<std::uint64_t>(t_param) || v >= n)
                throw parse_error("repetition coefficient index out of range");
            const std::size_t idx = (t - 1) * n + v;
            if (coeff_seen[idx])
                throw parse_error("duplicate repetition coefficient");
            coeff_seen[idx] = true;
            coeffs[idx] = coef;
        } else if (tag == "p") {
            pattern.push_back(static_cast<std::uint32_t>(parse_uint(p.token())));
            if (pattern.back() >= n)
                throw parse_error("punctured position out of range");
        } else {
            throw parse_error("unknown line tag '" + std::string(tag) + "' in code file");
        }
        if (!p.done())
            throw parse_error("trailing tokens on code file line");
    }
    for (bool seen : coeff_seen)
        if (!seen)
            throw parse_error("missing repetition coefficients");
    for (std::size_t i = 1; i < pattern.size(); ++i)
        if (pattern[i] <= pattern[i - 1])
            throw parse_error("punctured positions must be sorted and distinct");

    try {
        MotherCode mother(std::move(field), n, dv, dc, std::move(edges), seed);
        if (mother.checks() != m_checks)
            throw parse_error("check count in header does not match graph");
        RepCode code(std::move(mother), t_param,
                     std::move(coeffs), CoeffDomain::ExcludeZero, seed);
        return CodeFile{std::move(code), std::move(pattern)};
    } catch (const config_error& e) {
        throw parse_error(std::string("invalid code file: ") + e.what());
    } catch (const construction_error& e) {
        throw parse_error(std::string("invalid code file: ") + e.what());
    }
}

CodeFile load_code(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw parse_error("cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_code(buf.str());
}

} // namespace nbmr
