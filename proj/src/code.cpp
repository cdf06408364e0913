#include "nbmr/code.hpp"

#include "nbmr/errors.hpp"
#include "nbmr/rng.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace nbmr {

namespace {

constexpr std::uint64_t kMotherStream = 0x6d;   // stream tags so one user seed
constexpr std::uint64_t kExtendStream = 0x72;   // drives independent draws
constexpr std::uint64_t kPunctureStream = 0x70;

// Socket-based configuration model. Socket i belongs to check i / d_c and is
// matched with a variable; repair passes swap sockets until no check sees the
// same variable twice. 4-cycles (two variables sharing two checks) are also
// swapped away while the pass budget lasts; on tiny graphs they can be
// unavoidable, so they are tolerated after the budget.
std::vector<Edge> sample_graph(std::mt19937_64& rng, std::uint32_t n, int d_v, int d_c) {
    const std::size_t e_total = static_cast<std::size_t>(n) * static_cast<std::size_t>(d_v);
    std::vector<std::uint32_t> sockets;
    sockets.reserve(e_total);
    for (std::uint32_t v = 0; v < n; ++v)
        for (int t = 0; t < d_v; ++t)
            sockets.push_back(v);
    fisher_yates(sockets, rng);

    const int parallel_passes = 500;
    const int girth_passes = 60;
    for (int pass = 0; pass < parallel_passes; ++pass) {
        std::vector<std::size_t> offenders;

        std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> seen;
        for (std::size_t i = 0; i < e_total; ++i) {
            const auto key = std::make_pair(static_cast<std::uint32_t>(i / static_cast<std::size_t>(d_c)),
                                            sockets[i]);
            if (!seen.emplace(key, i).second)
                offenders.push_back(i);
        }

        if (offenders.empty() && pass < girth_passes) {
            // var -> sorted check list; any check pair seen twice is a 4-cycle
            std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> pair_owner;
            std::vector<std::vector<std::uint32_t>> var_checks(n);
            for (std::size_t i = 0; i < e_total; ++i)
                var_checks[sockets[i]].push_back(static_cast<std::uint32_t>(i / static_cast<std::size_t>(d_c)));
            std::set<std::uint32_t> bad_vars;
            for (std::uint32_t v = 0; v < n; ++v) {
                auto& cs = var_checks[v];
                std::sort(cs.begin(), cs.end());
                for (std::size_t a = 0; a < cs.size(); ++a)
                    for (std::size_t b = a + 1; b < cs.size(); ++b) {
                        auto [it, fresh] = pair_owner.emplace(std::make_pair(cs[a], cs[b]), v);
                        if (!fresh)
                            bad_vars.insert(v);
                    }
            }
            for (std::size_t i = 0; i < e_total && !bad_vars.empty(); ++i)
                if (bad_vars.count(sockets[i]))
                    offenders.push_back(i);
        }

        if (offenders.empty())
            break;
        for (std::size_t i : offenders) {
            const std::size_t j = static_cast<std::size_t>(uniform_below(rng, e_total));
            std::swap(sockets[i], sockets[j]);
        }
    }

    std::set<std::pair<std::uint32_t, std::uint32_t>> distinct;
    for (std::size_t i = 0; i < e_total; ++i)
        distinct.emplace(static_cast<std::uint32_t>(i / static_cast<std::size_t>(d_c)), sockets[i]);
    if (distinct.size() != e_total)
        throw construction_error("could not remove parallel edges from the Tanner graph");

    std::vector<Edge> edges;
    edges.reserve(e_total);
    for (std::size_t i = 0; i < e_total; ++i)
        edges.push_back(Edge{static_cast<std::uint32_t>(i / static_cast<std::size_t>(d_c)), sockets[i], 1});
    return edges;
}

} // namespace

MotherCode::MotherCode(Field field, std::uint32_t n, int d_v, int d_c,
                       std::vector<Edge> edges, std::uint64_t seed)
    : field_(std::move(field)), n_(n), d_v_(d_v), d_c_(d_c), seed_(seed),
      edges_(std::move(edges)) {
    if (d_v < 1 || d_c < 2 || n < static_cast<std::uint32_t>(d_c))
        throw config_error("mother code needs d_v >= 1, d_c >= 2, N >= d_c");
    if ((static_cast<std::uint64_t>(n) * d_v) % d_c != 0)
        throw config_error("d_v * N must be divisible by d_c");
    checks_ = static_cast<std::uint32_t>(static_cast<std::uint64_t>(n) * d_v / d_c);

    const std::size_t e_total = static_cast<std::size_t>(n) * d_v;
    if (edges_.size() != e_total)
        throw config_error("edge list size does not match N * d_v");

    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.check != b.check ? a.check < b.check : a.var < b.var;
    });

    std::vector<int> var_deg(n_, 0), check_deg(checks_, 0);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (e.var >= n_ || e.check >= checks_)
            throw config_error("edge index out of range");
        if (e.label == 0 || e.label >= field_.q())
            throw config_error("edge label must be a nonzero field symbol");
        if (i > 0 && edges_[i - 1].check == e.check && edges_[i - 1].var == e.var)
            throw config_error("parallel edge in Tanner graph");
        ++var_deg[e.var];
        ++check_deg[e.check];
    }
    for (std::uint32_t v = 0; v < n_; ++v)
        if (var_deg[v] != d_v_)
            throw config_error("variable degree != d_v");
    for (std::uint32_t c = 0; c < checks_; ++c)
        if (check_deg[c] != d_c_)
            throw config_error("check degree != d_c");

    var_edges_.assign(e_total, 0);
    std::vector<int> slot(n_, 0);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const std::uint32_t v = edges_[i].var;
        var_edges_[static_cast<std::size_t>(v) * d_v_ + slot[v]++] = static_cast<std::uint32_t>(i);
    }

    build_encoder();
}

void MotherCode::build_encoder() {
    const std::uint32_t m_rows = checks_;
    const std::uint32_t n_cols = n_;
    std::vector<symbol_t> h(static_cast<std::size_t>(m_rows) * n_cols, 0);
    for (const Edge& e : edges_)
        h[static_cast<std::size_t>(e.check) * n_cols + e.var] = e.label;

    auto row = [&](std::uint32_t r) { return h.data() + static_cast<std::size_t>(r) * n_cols; };

    info_positions_.clear();
    parity_positions_.assign(m_rows, 0);
    std::uint32_t rank = 0;
    for (std::uint32_t col = 0; col < n_cols; ++col) {
        std::uint32_t pivot = rank;
        while (pivot < m_rows && row(pivot)[col] == 0)
            ++pivot;
        if (pivot == m_rows) {
            info_positions_.push_back(col);
            continue;
        }
        if (pivot != rank)
            std::swap_ranges(row(pivot), row(pivot) + n_cols, row(rank));
        const symbol_t scale = field_.inv(row(rank)[col]);
        if (scale != 1)
            for (std::uint32_t j = col; j < n_cols; ++j)
                row(rank)[j] = field_.mul(row(rank)[j], scale);
        for (std::uint32_t r = 0; r < m_rows; ++r) {
            if (r == rank)
                continue;
            const symbol_t f = row(r)[col];
            if (f == 0)
                continue;
            for (std::uint32_t j = col; j < n_cols; ++j)
                row(r)[j] = field_.add(row(r)[j], field_.mul(f, row(rank)[j]));
        }
        parity_positions_[rank] = col;
        ++rank;
        if (rank == m_rows) {
            for (std::uint32_t c = col + 1; c < n_cols; ++c)
                info_positions_.push_back(c);
            break;
        }
    }
    if (rank < m_rows)
        throw construction_error("parity-check matrix is rank deficient (rank " +
                                 std::to_string(rank) + " of " + std::to_string(m_rows) + ")");

    const std::size_t k_cols = info_positions_.size();
    solve_.assign(static_cast<std::size_t>(m_rows) * k_cols, 0);
    for (std::uint32_t r = 0; r < m_rows; ++r)
        for (std::size_t j = 0; j < k_cols; ++j)
            solve_[static_cast<std::size_t>(r) * k_cols + j] = row(r)[info_positions_[j]];
}

std::vector<symbol_t> MotherCode::encode(std::span<const symbol_t> info) const {
    if (info.size() != k())
        throw config_error("information word must have K = N - M symbols");
    std::vector<symbol_t> x(n_, 0);
    for (std::size_t j = 0; j < info.size(); ++j)
        x[info_positions_[j]] = info[j];
    const std::size_t k_cols = info.size();
    for (std::uint32_t r = 0; r < checks_; ++r) {
        symbol_t s = 0;
        const symbol_t* coeffs = solve_.data() + static_cast<std::size_t>(r) * k_cols;
        for (std::size_t j = 0; j < k_cols; ++j)
            s = field_.add(s, field_.mul(coeffs[j], info[j]));
        x[parity_positions_[r]] = s;
    }
    return x;
}

std::vector<symbol_t> MotherCode::extract_info(std::span<const symbol_t> codeword) const {
    if (codeword.size() != n_)
        throw config_error("codeword must have N symbols");
    std::vector<symbol_t> info(info_positions_.size());
    for (std::size_t j = 0; j < info.size(); ++j)
        info[j] = codeword[info_positions_[j]];
    return info;
}

bool MotherCode::syndrome_ok(std::span<const symbol_t> x) const {
    if (x.size() != n_)
        throw config_error("codeword must have N symbols");
    for (std::uint32_t c = 0; c < checks_; ++c) {
        symbol_t s = 0;
        const std::size_t begin = check_edge_begin(c);
        for (int t = 0; t < d_c_; ++t) {
            const Edge& e = edges_[begin + static_cast<std::size_t>(t)];
            s = field_.add(s, field_.mul(e.label, x[e.var]));
        }
        if (s != 0)
            return false;
    }
    return true;
}

MotherCode build_mother(const Field& field, std::uint32_t n, int d_v, int d_c,
                        std::uint64_t seed) {
    if (d_v < 1 || d_c < 2 || n < static_cast<std::uint32_t>(d_c))
        throw config_error("mother code needs d_v >= 1, d_c >= 2, N >= d_c");
    if ((static_cast<std::uint64_t>(n) * d_v) % d_c != 0)
        throw config_error("d_v * N must be divisible by d_c");
    auto rng = make_stream(seed, kMotherStream);
    const int graph_rounds = 10;
    const int label_rounds = 10;
    int attempts = 0;
    std::string last_error = "no attempt made";
    for (int g = 0; g < graph_rounds; ++g) {
        std::vector<Edge> graph = sample_graph(rng, n, d_v, d_c);
        for (int l = 0; l < label_rounds; ++l) {
            ++attempts;
            std::vector<Edge> edges = graph;
            for (Edge& e : edges)
                e.label = static_cast<symbol_t>(1 + uniform_below(rng, static_cast<std::uint64_t>(field.q() - 1)));
            try {
                return MotherCode(field, n, d_v, d_c, std::move(edges), seed);
            } catch (const construction_error& err) {
                last_error = err.what();
            }
        }
    }
    throw construction_error("mother code construction failed after " +
                             std::to_string(attempts) + " attempts: " + last_error);
}

RepCode::RepCode(MotherCode mother, int T, std::vector<symbol_t> coeffs,
                 CoeffDomain domain, std::uint64_t seed)
    : mother_(std::move(mother)), T_(T), domain_(domain), seed_(seed),
      coeffs_(std::move(coeffs)) {
    if (T_ < 1)
        throw config_error("repetition parameter T must be >= 1");
    if (coeffs_.size() != static_cast<std::size_t>(T_ - 1) * mother_.n())
        throw config_error("repetition coefficient count must be (T-1) * N");
    for (symbol_t r : coeffs_)
        if (r == 0 || r >= mother_.field().q())
            throw config_error("repetition coefficients must be nonzero field symbols");
}

std::vector<symbol_t> RepCode::encode(std::span<const symbol_t> info) const {
    std::vector<symbol_t> x = mother_.encode(info);
    x.resize(length());
    const std::uint32_t n = mother_.n();
    const Field& f = field();
    for (int t = 1; t < T_; ++t)
        for (std::uint32_t v = 0; v < n; ++v)
            x[static_cast<std::size_t>(t) * n + v] = f.mul(coeff(t, v), x[v]);
    return x;
}

bool RepCode::is_codeword(std::span<const symbol_t> x) const {
    if (x.size() != length())
        throw config_error("word must have T * N symbols");
    const std::uint32_t n = mother_.n();
    if (!mother_.syndrome_ok(x.subspan(0, n)))
        return false;
    const Field& f = field();
    for (int t = 1; t < T_; ++t)
        for (std::uint32_t v = 0; v < n; ++v)
            if (x[static_cast<std::size_t>(t) * n + v] != f.mul(coeff(t, v), x[v]))
                return false;
    return true;
}

void validate_coeff_domain(const Field& field, CoeffDomain domain) {
    if (domain == CoeffDomain::ExcludeZeroOne && field.q() <= 2)
        throw config_error("coefficient domain GF(2^m) \\ {0,1} is empty for m = 1");
}

RepCode extend(MotherCode mother, int T, CoeffDomain domain, std::uint64_t seed) {
    if (T < 1)
        throw config_error("repetition parameter T must be >= 1");
    validate_coeff_domain(mother.field(), domain);
    const int q = mother.field().q();
    auto rng = make_stream(seed, kExtendStream);
    std::vector<symbol_t> coeffs;
    coeffs.reserve(static_cast<std::size_t>(T - 1) * mother.n());
    for (int t = 1; t < T; ++t) {
        for (std::uint32_t v = 0; v < mother.n(); ++v) {
            symbol_t r = 1;
            switch (domain) {
            case CoeffDomain::ExcludeZero:
                r = static_cast<symbol_t>(1 + uniform_below(rng, static_cast<std::uint64_t>(q - 1)));
                break;
            case CoeffDomain::ExcludeZeroOne:
                r = static_cast<symbol_t>(2 + uniform_below(rng, static_cast<std::uint64_t>(q - 2)));
                break;
            case CoeffDomain::AllOnes:
                r = 1;
                break;
            }
            coeffs.push_back(r);
        }
    }
    return RepCode(std::move(mother), T, std::move(coeffs), domain, seed);
}

PuncturePattern random_puncture(const MotherCode& mother, Rational target_rate,
                                std::uint64_t seed) {
    if (target_rate.num <= 0 || target_rate.den <= 0)
        throw config_error("puncture target rate must be positive");
    if (target_rate.num > target_rate.den)
        throw config_error("puncture target rate above 1 is unreachable");
    const std::int64_t n = mother.n();
    const std::int64_t k = mother.k();
    // ceil(N (1 - R/target)) with R = K/N, computed exactly in integers
    const std::int64_t kept = k * target_rate.den / target_rate.num;
    const std::int64_t punctured = n - kept;
    if (punctured < 0)
        throw config_error("puncture target rate below the mother code rate");
    std::vector<std::uint32_t> all(mother.n());
    for (std::uint32_t v = 0; v < mother.n(); ++v)
        all[v] = v;
    auto rng = make_stream(seed, kPunctureStream);
    fisher_yates(all, rng);
    PuncturePattern pattern(all.begin(), all.begin() + punctured);
    std::sort(pattern.begin(), pattern.end());
    return pattern;
}

std::uint32_t transmitted_symbols(const RepCode& code, const PuncturePattern& pattern) {
    return code.length() - static_cast<std::uint32_t>(pattern.size());
}

double transmitted_rate_bits(const RepCode& code, const PuncturePattern& pattern) {
    return static_cast<double>(code.mother().k()) / transmitted_symbols(code, pattern);
}

} // namespace nbmr
