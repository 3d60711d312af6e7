#include "orthantloop/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "orthantloop/gaussint.hpp"
#include "orthantloop/npoint.hpp"

namespace oloop {

Command parse_command(const std::string& name) {
    if (name == "compute") return Command::compute;
    if (name == "validate") return Command::validate;
    if (name == "expand") return Command::expand;
    if (name == "tensor") return Command::tensor;
    if (name == "oracle") return Command::oracle;
    throw Error(ErrorKind::ParseError, "unknown command '" + name + "'");
}

OutputFormat parse_format(const std::string& name) {
    if (name == "text") return OutputFormat::text;
    if (name == "csv") return OutputFormat::csv;
    if (name == "jsonlines") return OutputFormat::jsonlines;
    throw Error(ErrorKind::ParseError, "unknown output format '" + name + "'");
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ParseError:
        case ErrorKind::ValidationError:
        case ErrorKind::NonPositiveMass:
        case ErrorKind::InconsistentMomenta:
            return 2;
        case ErrorKind::DivergentIntegral:
            return 4;
        default:
            return 3;
    }
}

// ---------------------------------------------------------------- config parsing

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string section;
    std::string value;
    int line = 0;
};

[[noreturn]] void parse_fail(const std::string& source, int line, const std::string& msg) {
    throw Error(ErrorKind::ParseError, source + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& source, const Entry& e, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(e.value, &used);
        if (trim(e.value.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    parse_fail(source, e.line, "'" + key + "' expects a number, got '" + e.value + "'");
}

int to_int(const std::string& source, const Entry& e, const std::string& key) {
    try {
        std::size_t used = 0;
        const long v = std::stol(e.value, &used);
        if (trim(e.value.substr(used)).empty()) return static_cast<int>(v);
    } catch (const std::exception&) {
    }
    parse_fail(source, e.line, "'" + key + "' expects an integer, got '" + e.value + "'");
}

// "mass_3" -> 3; "k2_1_4" -> {1, 4}
std::vector<int> indices(const std::string& key, const std::string& prefix) {
    std::vector<int> out;
    std::stringstream ss(key.substr(prefix.size()));
    std::string part;
    while (std::getline(ss, part, '_')) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) return {};
        out.push_back(std::stoi(part));
    }
    return out;
}

const std::map<std::string, std::vector<std::string>> kSectionPrefixes = {
    {"legs", {"mass_"}},
    {"invariants", {"k2_"}},
    {"powers", {"nu_"}},
    {"dimension", {"n", "d", "epsilon_order"}},
    {"momenta", {"p_", "metric"}},
};

bool key_allowed(const std::string& section, const std::string& key) {
    if (section == "dimension") return key == "n" || key == "d" || key == "epsilon_order";
    if (section == "momenta" && key == "metric") return true;
    const auto it = kSectionPrefixes.find(section);
    if (it == kSectionPrefixes.end()) return false;
    for (const auto& p : it->second)
        if (key.rfind(p, 0) == 0 && p.back() == '_') return true;
    return false;
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text, const std::string& source,
                               const std::vector<std::string>& overrides) {
    std::map<std::string, Entry> entries;
    std::vector<std::string> order;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parse_fail(source, line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!kSectionPrefixes.count(section)) parse_fail(source, line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(source, line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) parse_fail(source, line_no, "key '" + key + "' outside any section");
        if (!key_allowed(section, key)) parse_fail(source, line_no, "unknown key '" + key + "' in [" + section + "]");
        if (value.empty()) parse_fail(source, line_no, "missing value for '" + key + "'");
        if (entries.count(key)) parse_fail(source, line_no, "duplicate key '" + key + "'");
        entries[key] = Entry{section, value, line_no};
        order.push_back(key);
    }
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "override '" + ov + "' is not key=value");
        const std::string key = trim(ov.substr(0, eq));
        auto it = entries.find(key);
        if (it == entries.end())
            throw Error(ErrorKind::ParseError, "override '" + key + "' does not name a key present in " + source);
        it->second.value = trim(ov.substr(eq + 1));
    }

    ParsedConfig out;
    // legs
    std::map<int, std::pair<double, int>> masses;
    int N = 0;
    for (const auto& key : order) {
        const Entry& e = entries[key];
        if (e.section != "legs") continue;
        const auto idx = indices(key, "mass_");
        if (idx.size() != 1 || idx[0] < 1) parse_fail(source, e.line, "malformed leg key '" + key + "'");
        masses[idx[0]] = {to_double(source, e, key), e.line};
        N = std::max(N, idx[0]);
    }
    if (N < 1) throw Error(ErrorKind::ParseError, source + ": no [legs] masses given");
    if (N > kMaxDim) throw Error(ErrorKind::ValidationError, source + ": at most 9 legs");
    out.config.masses.assign(N, 0.0);
    for (int i = 1; i <= N; ++i) {
        if (!masses.count(i)) throw Error(ErrorKind::ParseError, source + ": mass_" + std::to_string(i) + " missing");
        const auto [m, line] = masses[i];
        if (!(m > 0.0))
            throw Error(ErrorKind::ValidationError,
                        source + ":" + std::to_string(line) + ": mass_" + std::to_string(i) + " must be positive");
        out.config.masses[i - 1] = m;
    }

    // invariants: either triangle is enough, both must agree
    out.config.invariants = RMat(N);
    std::vector<std::vector<int>> seen(N, std::vector<int>(N, 0));
    bool lower_given = false;
    for (const auto& key : order) {
        const Entry& e = entries[key];
        if (e.section != "invariants") continue;
        const auto idx = indices(key, "k2_");
        if (idx.size() != 2 || idx[0] < 1 || idx[1] < 1 || idx[0] > N || idx[1] > N)
            parse_fail(source, e.line, "malformed or out-of-range invariant key '" + key + "'");
        const int i = idx[0] - 1, j = idx[1] - 1;
        const double v = to_double(source, e, key);
        if (i == j) {
            out.warnings.push_back(source + ":" + std::to_string(e.line) + ": diagonal invariant '" + key +
                                   "' ignored");
            continue;
        }
        if (i > j) lower_given = true;
        if (seen[j][i] && out.config.invariants(j, i) != v)
            throw Error(ErrorKind::ValidationError, source + ":" + std::to_string(e.line) +
                                                        ": asymmetric invariants, '" + key + "' disagrees with k2_" +
                                                        std::to_string(j + 1) + "_" + std::to_string(i + 1));
        out.config.invariants(i, j) = v;
        seen[i][j] = e.line;
    }
    bool mirrored = false;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            if (!seen[i][j] && !seen[j][i])
                throw Error(ErrorKind::ParseError, source + ": invariant k2_" + std::to_string(i + 1) + "_" +
                                                       std::to_string(j + 1) + " missing");
            if (seen[i][j] && !seen[j][i]) {
                out.config.invariants(j, i) = out.config.invariants(i, j);
                mirrored = true;
            } else if (!seen[i][j]) {
                out.config.invariants(i, j) = out.config.invariants(j, i);
                mirrored = true;
            }
        }
    if (mirrored && !lower_given)
        out.warnings.push_back(source + ": only the upper triangle of the invariants given; mirrored");
    else if (mirrored)
        out.warnings.push_back(source + ": invariants given as a single triangle; mirrored");

    // powers
    out.config.powers.assign(N, 1);
    for (const auto& key : order) {
        const Entry& e = entries[key];
        if (e.section != "powers") continue;
        const auto idx = indices(key, "nu_");
        if (idx.size() != 1 || idx[0] < 1 || idx[0] > N) parse_fail(source, e.line, "malformed power key '" + key + "'");
        const int p = to_int(source, e, key);
        if (p < 1)
            throw Error(ErrorKind::ValidationError,
                        source + ":" + std::to_string(e.line) + ": " + key + " must be a positive integer");
        out.config.powers[idx[0] - 1] = p;
    }

    // dimension
    const bool has_n = entries.count("n"), has_d = entries.count("d");
    if (has_n == has_d) throw Error(ErrorKind::ParseError, source + ": [dimension] needs exactly one of n or d");
    if (has_n) {
        out.config.dimension.n = to_double(source, entries["n"], "n");
        if (entries.count("epsilon_order"))
            parse_fail(source, entries["epsilon_order"].line, "epsilon_order only goes with d");
    } else {
        const int d = to_int(source, entries["d"], "d");
        out.config.dimension.d = d;
        out.config.dimension.n = d;
        if (entries.count("epsilon_order")) {
            const int K = to_int(source, entries["epsilon_order"], "epsilon_order");
            if (K < 0) parse_fail(source, entries["epsilon_order"].line, "epsilon_order must be non-negative");
            out.config.dimension.epsilon_order = K;
        }
    }

    // momenta
    std::map<int, Vec4> momenta;
    for (const auto& key : order) {
        const Entry& e = entries[key];
        if (e.section != "momenta") continue;
        if (key == "metric") {
            if (e.value == "minkowski")
                out.metric = kMinkowski;
            else if (e.value == "euclidean")
                out.metric = kEuclidean;
            else
                parse_fail(source, e.line, "metric must be minkowski or euclidean");
            continue;
        }
        const auto idx = indices(key, "p_");
        if (idx.size() != 1 || idx[0] < 1 || idx[0] > N) parse_fail(source, e.line, "malformed momentum key '" + key + "'");
        std::istringstream vs(e.value);
        Vec4 p{};
        for (auto& c : p)
            if (!(vs >> c)) parse_fail(source, e.line, key + " needs four components");
        std::string extra;
        if (vs >> extra) parse_fail(source, e.line, key + " has more than four components");
        momenta[idx[0]] = p;
    }
    if (!momenta.empty()) {
        if (static_cast<int>(momenta.size()) != N)
            throw Error(ErrorKind::ParseError, source + ": [momenta] must list one p_i per leg");
        std::vector<Vec4> ps;
        for (int i = 1; i <= N; ++i) ps.push_back(momenta[i]);
        out.momenta = ps;
    }

    validate(out.config);
    if (out.momenta) check_momenta(out.config, *out.momenta, out.metric);
    return out;
}

ParsedConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::ParseError, "cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path, overrides);
}

// ---------------------------------------------------------------- records

namespace {

using Field = std::variant<std::string, long, double>;
using Record = std::vector<std::pair<std::string, Field>>;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x + 0.0);  // no "-0"
    return buf;
}

std::string field_text(const Field& f) {
    if (const auto* s = std::get_if<std::string>(&f)) return *s;
    if (const auto* i = std::get_if<long>(&f)) return std::to_string(*i);
    return fmt17(std::get<double>(f));
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) {
        if (c == '"') o += '"';
        o += c;
    }
    return o + "\"";
}

class Emitter {
public:
    Emitter(OutputFormat f, std::ostream& out) : format_(f), out_(out) {}

    void emit(const Record& r) {
        switch (format_) {
            case OutputFormat::jsonlines: {
                nlohmann::ordered_json j;
                for (const auto& [k, v] : r) {
                    if (const auto* s = std::get_if<std::string>(&v))
                        j[k] = *s;
                    else if (const auto* i = std::get_if<long>(&v))
                        j[k] = *i;
                    else
                        j[k] = std::get<double>(v) + 0.0;
                }
                out_ << j.dump() << '\n';
                break;
            }
            case OutputFormat::csv: {
                std::string header;
                for (const auto& kv : r) header += (header.empty() ? "" : ",") + kv.first;
                if (header != last_header_) {
                    out_ << header << '\n';
                    last_header_ = header;
                }
                std::string line;
                bool first = true;
                for (const auto& kv : r) {
                    if (!first) line += ',';
                    line += csv_quote(field_text(kv.second));
                    first = false;
                }
                out_ << line << '\n';
                break;
            }
            case OutputFormat::text: {
                bool first = true;
                for (const auto& [k, v] : r) {
                    out_ << (first ? "" : "  ") << k << '=' << field_text(v);
                    first = false;
                }
                out_ << '\n';
                break;
            }
        }
        out_.flush();
    }

private:
    OutputFormat format_;
    std::ostream& out_;
    std::string last_header_;
};

QuadratureSettings effective_quad(const RunRequest& r) {
    QuadratureSettings s = r.quad;
    if (!(s.rel_tol > 0.0)) throw Error(ErrorKind::ValidationError, "tolerance must be positive");
    return s;
}

int expansion_order(const RunRequest& r, const KinematicConfig& cfg) {
    const int K = r.order.value_or(cfg.dimension.epsilon_order);
    if (K < 0) throw Error(ErrorKind::ValidationError, "order must be non-negative");
    return K;
}

// ---------------------------------------------------------------- commands

int cmd_compute(const RunRequest& r, const ParsedConfig& pc, Emitter& em) {
    const KinematicConfig& cfg = pc.config;
    const IntegralValue v = evaluate(cfg, effective_quad(r));
    em.emit({{"N", static_cast<long>(cfg.n_legs())},
             {"n", cfg.dimension.n},
             {"nu", static_cast<long>(cfg.nu_total())},
             {"value_re", v.value.real()},
             {"value_im", v.value.imag()},
             {"abs_error", v.abs_error},
             {"method", std::string(method_name(v.method))}});
    return 0;
}

int cmd_expand(const RunRequest& r, const ParsedConfig& pc, Emitter& em) {
    KinematicConfig cfg = pc.config;
    if (!cfg.dimension.d) throw Error(ErrorKind::ValidationError, "expand needs d = <int> in [dimension]");
    cfg.dimension.epsilon_order = expansion_order(r, cfg);
    const EpsSeries es = eps_expand(cfg, effective_quad(r));
    for (int K = 0; K <= es.order(); ++K) {
        const IntegralValue& c = es.coefficients[K];
        em.emit({{"N", static_cast<long>(cfg.n_legs())},
                 {"d", static_cast<long>(es.d_base)},
                 {"k_shift", es.k_shift},
                 {"order", static_cast<long>(K)},
                 {"value_re", c.value.real()},
                 {"value_im", c.value.imag()},
                 {"abs_error", c.abs_error}});
    }
    return 0;
}

Record series_record(const std::string& family, long i, long j, int K, const IntegralValue& c) {
    return {{"family", family},       {"i", i},
            {"j", j},                 {"order", static_cast<long>(K)},
            {"value_re", c.value.real()}, {"value_im", c.value.imag()},
            {"abs_error", c.abs_error}};
}

int cmd_tensor(const RunRequest& r, const ParsedConfig& pc, Emitter& em) {
    const KinematicConfig& cfg = pc.config;
    TensorOptions opt;
    opt.order = expansion_order(r, cfg);
    opt.momenta = pc.momenta;
    opt.metric = pc.metric;
    const TensorReduction5 red = reduce_rank2_5pt(cfg, opt, effective_quad(r));
    for (int K = 0; K <= opt.order; ++K) {
        em.emit(series_record("g", 0, 0, K, red.g_coefficient.coefficients[K]));
        for (int k = 0; k < 5; ++k)
            em.emit(series_record("diag", k + 1, k + 1, K, red.diag_coefficients[k].coefficients[K]));
        for (int k = 0; k < 5; ++k)
            for (int l = k + 1; l < 5; ++l)
                em.emit(series_record("offdiag", k + 1, l + 1, K, red.offdiag_coefficients[k][l].coefficients[K]));
    }
    if (red.momenta) {
        for (int K = 0; K <= opt.order; ++K) {
            const auto t = assemble_rank2(red, K);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    IntegralValue c;
                    c.value = t[a][b];
                    em.emit(series_record("assembled", a, b, K, c));
                }
        }
    }
    return 0;
}

int cmd_oracle(const RunRequest& r, const ParsedConfig& pc, Emitter& em) {
    const KinematicConfig& cfg = pc.config;
    const QuadratureSettings s = effective_quad(r);
    auto emit = [&](const std::string& name, const IntegralValue& v, const std::string& flag) {
        em.emit({{"oracle", name},
                 {"value_re", v.value.real()},
                 {"value_im", v.value.imag()},
                 {"std_error", v.abs_error},
                 {"method", std::string(method_name(v.method))},
                 {"samples", static_cast<long>(v.method == Method::monte_carlo ? r.mc.samples : 0)},
                 {"flag", flag}});
    };
    emit("feynman", feynman_oracle(cfg, r.mc, s), "");
    const double n = cfg.dimension.n;
    const int nu = cfg.nu_total();
    const SigmaMatrix sm = build_sigma(cfg);
    if (sm.pd_status == PdStatus::positive_definite) {
        const MomentEstimate m = truncated_moment_mc(cfg, r.mc);
        emit("truncated_moment", m.value, m.infinite_variance ? "infinite_variance" : "");
        if (nu < n && n < 2 * nu) emit("lauricella", lauricella_expectation_mc(cfg, r.mc), "");
    }
    return 0;
}

// ---------------------------------------------------------------- validate

struct Check {
    std::string name;
    bool pass = false;
    double measured = 0.0;  // discrepancy in the unit the check names
    double limit = 0.0;
};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

KinematicConfig cfg_from(const RMat& sigma, double n, std::vector<int> powers = {}) {
    return config_from_sigma(sigma, n, std::move(powers));
}

RMat sample_spd(int N, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    RMat a(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) a(i, j) = g(rng);
    RMat s(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double acc = (i == j) ? 0.5 * N : 0.0;
            for (int k = 0; k < N; ++k) acc += a(i, k) * a(j, k) / N;
            s(i, j) = acc;
        }
    return s;
}

std::vector<Check> builtin_checks(const RunRequest& r) {
    std::vector<Check> out;
    const QuadratureSettings s = effective_quad(r);
    std::mt19937_64 rng(r.mc.seed);
    auto add = [&](const std::string& name, double measured, double limit) {
        out.push_back({name, measured <= limit, measured, limit});
    };

    {
        RMat k2(2);
        k2(0, 1) = k2(1, 0) = 1.0;
        const KinematicConfig c = make_config({1.0, 1.0}, k2, 2.0);
        add("two_point_closed_form_vs_feynman", rel(j2_2d(c).value, feynman_oracle(c, r.mc, s).value), 1e-6);
    }
    {
        const KinematicConfig c = cfg_from(sample_spd(3, rng), 3.0);
        add("three_point_solid_angle_vs_feynman", rel(j3_3d(c).value, feynman_oracle(c, r.mc, s).value), 1e-6);
    }
    {
        RMat rho(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) rho(i, j) = i == j ? 1.0 : 0.5;
        add("orthant_equicorrelated_quarter", std::abs(orthant_probability(rho, s).value - 0.25), 1e-10);
        const OrthantEstimate e = orthant_mc(rho, r.mc);
        add("orthant_mc_equicorrelated_sigma", std::abs(e.probability - 0.25) / e.std_error, 3.0);
    }
    {
        const RMat c4 = sample_spd(4, rng);
        add("quad_anchor_invariance", std::abs(i_quad(c4, 0, s) - i_quad(c4, 2, s)), 1e-6);
    }
    {
        const KinematicConfig c = cfg_from(sample_spd(4, rng), 4.0);
        const IntegralValue a = j4_4d(c, s);
        const IntegralValue o = feynman_oracle(c, r.mc, s);
        add("four_point_vs_feynman_sigma", std::abs(a.value - o.value) / o.abs_error, 3.0);
    }
    {
        const KinematicConfig c = cfg_from(sample_spd(3, rng), 5.0);
        add("raise_dimension_three_point", rel(raise_dimension(c, s, 3.0).value, feynman_oracle(c, r.mc, s).value),
            1e-4);
    }
    {
        const KinematicConfig c = cfg_from(sample_spd(5, rng), 4.0);
        add("lower_dimension_five_point", rel(lower_dimension(c, s).value, j5_4d(c, s).value), 1e-4);
    }
    {
        const RMat sg = sample_spd(3, rng);
        const IntegralValue a = raise_power_single_sigma(sg, 0, 1, s);
        const IntegralValue b = raise_power_duplicate_sigma(sg, {2, 1, 1}, s);
        add("power_raising_routes", rel(a.value, b.value), 1e-3);
    }
    return out;
}

int cmd_validate(const RunRequest& r, const std::optional<ParsedConfig>& pc, Emitter& em) {
    std::vector<Check> checks;
    if (pc) {
        const KinematicConfig& cfg = pc->config;
        const QuadratureSettings s = effective_quad(r);
        const IntegralValue v = evaluate(cfg, s);
        const IntegralValue o = feynman_oracle(cfg, r.mc, s);
        if (o.method == Method::monte_carlo)
            checks.push_back({"config_vs_feynman_sigma", false, std::abs(v.value - o.value) / o.abs_error, 3.0});
        else
            checks.push_back({"config_vs_feynman_rel", false, rel(v.value, o.value), 1e-6});
        checks.back().pass = checks.back().measured <= checks.back().limit;
    } else {
        checks = builtin_checks(r);
    }
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.pass;
        em.emit({{"check", c.name},
                 {"status", std::string(c.pass ? "PASS" : "FAIL")},
                 {"measured", c.measured},
                 {"limit", c.limit}});
    }
    return all ? 0 : 1;
}

}  // namespace

int run(const RunRequest& request, std::ostream& out, std::ostream& err) {
    try {
        validate(request.mc);
        Emitter em(request.output_format, out);
        std::optional<ParsedConfig> pc;
        if (!request.config_path.empty()) {
            pc = parse_config(request.config_path, request.overrides);
            for (const auto& w : pc->warnings) err << "warning: " << w << '\n';
        } else if (!request.overrides.empty()) {
            throw Error(ErrorKind::ParseError, "overrides need a config file");
        }
        if (request.command == Command::validate) return cmd_validate(request, pc, em);
        if (!pc) throw Error(ErrorKind::ParseError, "this command needs --config");
        switch (request.command) {
            case Command::compute:
                return cmd_compute(request, *pc, em);
            case Command::expand:
                return cmd_expand(request, *pc, em);
            case Command::tensor:
                return cmd_tensor(request, *pc, em);
            case Command::oracle:
                return cmd_oracle(request, *pc, em);
            case Command::validate:
                break;
        }
        return 0;
    } catch (const Error& e) {
        err << "error [" << error_kind_name(e.kind()) << "]: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace oloop
