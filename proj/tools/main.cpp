// Command-line front end: code construction, encoding, single-shot decoding,
// seeded Monte Carlo FER campaigns, and BEC density-evolution thresholds.
#include "nbmr/code_io.hpp"
#include "nbmr/density.hpp"
#include "nbmr/errors.hpp"
#include "nbmr/rng.hpp"
#include "nbmr/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace nbmr;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitConstruction = 3;

CoeffDomain parse_domain(const std::string& name) {
    if (name == "exclude-zero")
        return CoeffDomain::ExcludeZero;
    if (name == "exclude-zero-one")
        return CoeffDomain::ExcludeZeroOne;
    if (name == "all-ones")
        return CoeffDomain::AllOnes;
    throw config_error("unknown coefficient domain '" + name + "'");
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            return Rational{std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1))};
        }
        const double v = std::stod(text);
        if (!(v > 0.0 && v <= 1.0))
            throw config_error("rate must be in (0, 1]");
        return Rational{static_cast<std::int64_t>(std::llround(v * 1000000000.0)), 1000000000};
    } catch (const std::logic_error&) {
        throw config_error("cannot parse rate '" + text + "'");
    }
}

// "0.6,0.62,0.64" or "0.6:0.02:0.64"
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    try {
        if (text.find(':') != std::string::npos) {
            std::istringstream in(text);
            std::string lo_s, step_s, hi_s;
            std::getline(in, lo_s, ':');
            std::getline(in, step_s, ':');
            std::getline(in, hi_s, ':');
            const double lo = std::stod(lo_s), step = std::stod(step_s), hi = std::stod(hi_s);
            if (step <= 0.0)
                throw config_error("grid step must be positive");
            for (double v = lo; v <= hi + 1e-12; v += step)
                grid.push_back(v);
        } else {
            std::istringstream in(text);
            std::string tok;
            while (std::getline(in, tok, ','))
                if (!tok.empty())
                    grid.push_back(std::stod(tok));
        }
    } catch (const std::logic_error&) {
        throw config_error("cannot parse grid '" + text + "'");
    }
    if (grid.empty())
        throw config_error("grid is empty");
    return grid;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string tok;
    try {
        while (std::getline(in, tok, ',')) {
            const auto dash = tok.find('-');
            if (dash != std::string::npos && dash > 0) {
                const int lo = std::stoi(tok.substr(0, dash));
                const int hi = std::stoi(tok.substr(dash + 1));
                for (int v = lo; v <= hi; ++v)
                    out.push_back(v);
            } else if (!tok.empty()) {
                out.push_back(std::stoi(tok));
            }
        }
    } catch (const std::logic_error&) {
        throw config_error("cannot parse integer list '" + text + "'");
    }
    if (out.empty())
        throw config_error("integer list is empty");
    return out;
}

std::string channel_name(ChannelKind k) { return k == ChannelKind::Bec ? "bec" : "awgn"; }

json record_json(const SimRecord& r) {
    json j;
    j["channel"] = channel_name(r.channel);
    j["param"] = r.param;
    j["trials"] = r.trials;
    j["frame_errors"] = r.frame_errors;
    j["fer"] = r.fer;
    j["symbol_errors"] = r.symbol_errors;
    j["bit_errors"] = r.bit_errors;
    j["mean_iterations_ok"] = r.mean_iterations_ok;
    j["contradictions"] = r.contradictions;
    j["max_iter"] = r.max_iter;
    j["seed"] = r.master_seed;
    char crc[16];
    std::snprintf(crc, sizeof crc, "0x%08x", r.code_crc);
    j["code_crc32"] = crc;
    return j;
}

std::vector<symbol_t> read_symbols(std::istream& in, const Field& field) {
    std::vector<symbol_t> out;
    long long v = 0;
    while (in >> v) {
        if (v < 0 || v >= field.q())
            throw config_error("symbol " + std::to_string(v) + " outside GF(2^m)");
        out.push_back(static_cast<symbol_t>(v));
    }
    return out;
}

std::vector<BitObservation> read_observations(std::istream& in, ChannelKind kind, double sigma) {
    std::vector<BitObservation> obs;
    std::string tok;
    while (in >> tok) {
        BitObservation o;
        o.kind = kind;
        if (kind == ChannelKind::Bec) {
            if (tok == "e" || tok == "E" || tok == "?") {
                o.erased = true;
            } else if (tok == "0" || tok == "1") {
                o.y = tok == "1" ? 1.0 : 0.0;
            } else {
                throw config_error("BEC observation must be 0, 1 or e; got '" + tok + "'");
            }
        } else {
            try {
                o.y = std::stod(tok);
            } catch (const std::logic_error&) {
                throw config_error("cannot parse AWGN observation '" + tok + "'");
            }
            o.sigma = sigma;
        }
        obs.push_back(o);
    }
    return obs;
}

struct BuildArgs {
    int m = 8;
    std::uint32_t n = 72;
    int dv = 2;
    int dc = 3;
    int T = 1;
    std::uint64_t seed = 0;
    std::string domain = "exclude-zero-one";
    std::string puncture_rate;
    std::string out = "code.nbmr";
};

int cmd_build(const BuildArgs& a) {
    Field field(a.m);
    const CoeffDomain domain = parse_domain(a.domain);
    validate_coeff_domain(field, domain);
    MotherCode mother = build_mother(field, a.n, a.dv, a.dc, a.seed);
    PuncturePattern pattern;
    if (!a.puncture_rate.empty())
        pattern = random_puncture(mother, parse_rational(a.puncture_rate), a.seed);
    RepCode code = extend(std::move(mother), a.T, domain, a.seed);
    save_code(a.out, code, pattern);

    json j;
    j["file"] = a.out;
    j["m"] = a.m;
    j["N"] = code.mother().n();
    j["M"] = code.mother().checks();
    j["K"] = code.mother().k();
    j["T"] = code.T();
    j["rate"] = code.rate();
    j["info_bits"] = static_cast<std::uint64_t>(code.mother().k()) * a.m;
    j["transmitted_bits"] =
        static_cast<std::uint64_t>(transmitted_symbols(code, pattern)) * a.m;
    j["punctured"] = pattern.size();
    char crc[16];
    std::snprintf(crc, sizeof crc, "0x%08x", code_checksum(code, pattern));
    j["crc32"] = crc;
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_encode(const std::string& code_path, const std::string& info_text,
               const std::string& info_file, bool random_info, std::uint64_t seed,
               bool emit_bits) {
    CodeFile cf = load_code(code_path);
    std::vector<symbol_t> info;
    if (random_info) {
        auto rng = make_stream(seed);
        info.resize(cf.code.mother().k());
        for (auto& s : info)
            s = static_cast<symbol_t>(uniform_below(rng, cf.code.field().q()));
    } else if (!info_file.empty()) {
        std::ifstream f(info_file);
        if (!f)
            throw config_error("cannot open info file " + info_file);
        info = read_symbols(f, cf.code.field());
    } else if (!info_text.empty()) {
        std::istringstream in(info_text);
        info = read_symbols(in, cf.code.field());
    } else {
        info = read_symbols(std::cin, cf.code.field());
    }

    const auto codeword = cf.code.encode(info);
    if (emit_bits) {
        std::vector<bool> punct(cf.code.length(), false);
        for (auto v : cf.pattern)
            punct[v] = true;
        std::vector<symbol_t> transmitted;
        for (std::uint32_t i = 0; i < cf.code.length(); ++i)
            if (!punct[i])
                transmitted.push_back(codeword[i]);
        for (std::uint8_t b : symbols_to_bits(cf.code.field(), transmitted))
            std::cout << static_cast<int>(b);
        std::cout << "\n";
    } else {
        for (std::size_t i = 0; i < codeword.size(); ++i)
            std::cout << codeword[i] << (i + 1 == codeword.size() ? "\n" : " ");
    }
    return 0;
}

int cmd_decode(const std::string& code_path, const std::string& channel,
               const std::string& obs_file, double sigma, int max_iter) {
    CodeFile cf = load_code(code_path);
    if (channel != "bec" && channel != "awgn")
        throw config_error("channel must be bec or awgn");
    const ChannelKind kind = channel == "bec" ? ChannelKind::Bec : ChannelKind::Awgn;
    if (kind == ChannelKind::Awgn && !(sigma > 0.0))
        throw config_error("--sigma must be positive for the AWGN channel");

    std::vector<BitObservation> obs;
    if (obs_file.empty() || obs_file == "-") {
        obs = read_observations(std::cin, kind, sigma);
    } else {
        std::ifstream f(obs_file);
        if (!f)
            throw config_error("cannot open observation file " + obs_file);
        obs = read_observations(f, kind, sigma);
    }

    Decoder decoder(cf.code, cf.pattern);
    const DecodeResult res = decoder.decode(obs, max_iter);
    json j;
    j["success"] = res.success;
    j["iterations"] = res.iterations;
    j["contradictions"] = res.contradictions;
    j["estimate"] = res.estimate;
    std::cout << j.dump() << "\n";
    return 0;
}

struct SimArgs {
    std::string code_path;
    std::string channel = "bec";
    std::string grid;
    std::uint64_t seed = 0;
    int max_iter = 200;
    std::uint64_t min_trials = 1;
    std::uint64_t max_frame_errors = 100;
    std::uint64_t max_frames = 1000000;
    int workers = 1;
    bool all_zero = false;
    bool timing = false;
    std::string csv_path;
    std::string out_path;
};

int cmd_sim(const SimArgs& a) {
    CodeFile cf = load_code(a.code_path);
    SimConfig cfg;
    if (a.channel == "bec")
        cfg.channel = ChannelKind::Bec;
    else if (a.channel == "awgn")
        cfg.channel = ChannelKind::Awgn;
    else
        throw config_error("channel must be bec or awgn");
    cfg.grid = parse_grid(a.grid);
    cfg.master_seed = a.seed;
    cfg.max_iter = a.max_iter;
    cfg.min_trials = a.min_trials;
    cfg.max_frame_errors = a.max_frame_errors;
    cfg.max_frames = a.max_frames;
    cfg.workers = a.workers;
    cfg.info_mode = a.all_zero ? InfoMode::AllZero : InfoMode::Random;

    std::ofstream out_file;
    std::ostream* out = &std::cout;
    if (!a.out_path.empty()) {
        out_file.open(a.out_path);
        if (!out_file)
            throw config_error("cannot open output file " + a.out_path);
        out = &out_file;
    }
    std::ofstream csv;
    if (!a.csv_path.empty()) {
        csv.open(a.csv_path);
        if (!csv)
            throw config_error("cannot open CSV file " + a.csv_path);
        csv << "channel,param,trials,frame_errors,fer,symbol_errors,bit_errors,"
               "mean_iterations_ok,contradictions,max_iter,seed,code_crc32\n";
    }

    run_sim(cf.code, cf.pattern, cfg,
            [&](const SimRecord& r) {
                *out << record_json(r).dump() << "\n";
                out->flush();
                if (csv.is_open()) {
                    const json j = record_json(r);
                    csv << j["channel"].get<std::string>() << "," << json(r.param).dump() << ","
                        << r.trials << "," << r.frame_errors << "," << json(r.fer).dump() << ","
                        << r.symbol_errors << "," << r.bit_errors << ","
                        << json(r.mean_iterations_ok).dump() << "," << r.contradictions << ","
                        << r.max_iter << "," << r.master_seed << ","
                        << j["code_crc32"].get<std::string>() << "\n";
                    csv.flush();
                }
            },
            [&](const SimRecord& r, double seconds) {
                if (a.timing)
                    std::cerr << "# " << channel_name(r.channel) << " " << r.param << ": "
                              << r.trials << " trials, " << r.frame_errors << " frame errors, fer="
                              << r.fer << " (" << seconds << " s)\n";
            });
    return 0;
}

int cmd_threshold(int m, int dc, int T, double tol) {
    const double eps_star = threshold(m, dc, T, tol);
    const double rate = (1.0 - 2.0 / dc) / T; // d_v = 2 ensembles
    json j;
    j["m"] = m;
    j["dc"] = dc;
    j["T"] = T;
    j["threshold"] = eps_star;
    j["rate"] = rate;
    j["shannon_limit"] = 1.0 - rate;
    j["normalized_gap"] = (1.0 - eps_star - rate) / rate;
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_de_sweep(const std::string& m_list, const std::string& t_list, int dc, double tol) {
    for (int m : parse_int_list(m_list))
        for (int T : parse_int_list(t_list))
            cmd_threshold(m, dc, T, tol);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-binary LDPC codes with multiplicative repetition: "
                 "construction, reduced BP decoding, BEC density evolution, FER campaigns"};
    app.require_subcommand(1);

    BuildArgs build_args;
    auto* build = app.add_subcommand("build", "construct a code and write it to a file");
    build->add_option("--m", build_args.m, "field degree (1..10)")->required();
    build->add_option("--N", build_args.n, "mother code length in symbols")->required();
    build->add_option("--dv", build_args.dv, "variable degree");
    build->add_option("--dc", build_args.dc, "check degree");
    build->add_option("--T", build_args.T, "repetition parameter");
    build->add_option("--seed", build_args.seed, "construction seed")->required();
    build->add_option("--coeff-domain", build_args.domain,
                      "exclude-zero | exclude-zero-one | all-ones");
    build->add_option("--puncture-rate", build_args.puncture_rate,
                      "puncture the mother code to this rate (e.g. 1/2)");
    build->add_option("-o,--out", build_args.out, "output file");

    std::string enc_code, enc_info, enc_info_file;
    bool enc_random = false, enc_bits = false;
    std::uint64_t enc_seed = 0;
    auto* enc = app.add_subcommand("encode", "encode an information word");
    enc->add_option("--code", enc_code, "code file")->required();
    enc->add_option("--info", enc_info, "space-separated info symbols");
    enc->add_option("--info-file", enc_info_file, "file of info symbols");
    enc->add_flag("--random", enc_random, "draw a random info word");
    enc->add_option("--seed", enc_seed, "seed for --random");
    enc->add_flag("--bits", enc_bits, "emit transmitted bits instead of symbols");

    std::string dec_code, dec_channel = "bec", dec_obs;
    double dec_sigma = 0.0;
    int dec_max_iter = 200;
    auto* dec = app.add_subcommand("decode", "decode bit observations");
    dec->add_option("--code", dec_code, "code file")->required();
    dec->add_option("--channel", dec_channel, "bec | awgn")->required();
    dec->add_option("--obs", dec_obs, "observation file ('-' for stdin)");
    dec->add_option("--sigma", dec_sigma, "AWGN noise standard deviation");
    dec->add_option("--max-iter", dec_max_iter, "iteration cap");

    SimArgs sim_args;
    auto* sim = app.add_subcommand("sim", "seeded Monte Carlo FER campaign");
    sim->add_option("--code", sim_args.code_path, "code file")->required();
    sim->add_option("--channel", sim_args.channel, "bec | awgn")->required();
    sim->add_option("--grid", sim_args.grid, "comma list or lo:step:hi")->required();
    sim->add_option("--seed", sim_args.seed, "master seed")->required();
    sim->add_option("--max-iter", sim_args.max_iter, "decoder iteration cap");
    sim->add_option("--min-trials", sim_args.min_trials, "minimum trials per point");
    sim->add_option("--max-frame-errors", sim_args.max_frame_errors, "stop after this many errors");
    sim->add_option("--max-frames", sim_args.max_frames, "hard trial cap per point");
    sim->add_option("--workers", sim_args.workers, "worker threads");
    sim->add_flag("--all-zero", sim_args.all_zero, "all-zero codewords (BEC only)");
    sim->add_flag("--timing", sim_args.timing, "per-point timing on stderr");
    sim->add_option("--csv", sim_args.csv_path, "also write CSV");
    sim->add_option("--out", sim_args.out_path, "JSON-lines output file (default stdout)");

    int th_m = 1, th_dc = 3, th_T = 1;
    double th_tol = kBisectTol;
    auto* th = app.add_subcommand("threshold", "BEC density-evolution threshold");
    th->add_option("--m", th_m, "field degree")->required();
    th->add_option("--dc", th_dc, "check degree")->required();
    th->add_option("--T", th_T, "repetition parameter")->required();
    th->add_option("--tol", th_tol, "bisection tolerance");

    std::string sw_m = "1-10", sw_T = "1,2,3,5";
    int sw_dc = 3;
    double sw_tol = kBisectTol;
    auto* sweep = app.add_subcommand("de-sweep", "threshold grid over m and T");
    sweep->add_option("--m-list", sw_m, "e.g. 1-10 or 1,2,4");
    sweep->add_option("--T-list", sw_T, "e.g. 1,2,3,5");
    sweep->add_option("--dc", sw_dc, "check degree");
    sweep->add_option("--tol", sw_tol, "bisection tolerance");

    try {
        app.parse(argc, argv);
        if (*build)
            return cmd_build(build_args);
        if (*enc)
            return cmd_encode(enc_code, enc_info, enc_info_file, enc_random, enc_seed, enc_bits);
        if (*dec)
            return cmd_decode(dec_code, dec_channel, dec_obs, dec_sigma, dec_max_iter);
        if (*sim)
            return cmd_sim(sim_args);
        if (*th)
            return cmd_threshold(th_m, th_dc, th_T, th_tol);
        if (*sweep)
            return cmd_de_sweep(sw_m, sw_T, sw_dc, sw_tol);
        return kExitConfig;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return kExitConfig;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const parse_error& e) {
        std::cerr << "file error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const construction_error& e) {
        std::cerr << "construction error: " << e.what() << "\n";
        return kExitConstruction;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
