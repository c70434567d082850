// sphere-lab: command-line front end over the lattice-shell workbench.
// Every subcommand prints one CSV table (header row, comma-separated, LF,
// floats at 17 significant digits). With --out the table goes to a file and
// a JSON sidecar records the exact command line, parameters, seed, worker
// count, library version, and wall time; without --out the CSV goes to
// stdout and no sidecar is written. The CSV bytes depend only on the
// configuration (seed included), never on the worker count or the clock.
//
// Exit codes: 0 success (and --help/--version), 2 validation or usage
// error, 3 capacity, allocation, or output-file failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <new>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spherevar/arith.hpp"
#include "spherevar/capstat.hpp"
#include "spherevar/errors.hpp"
#include "spherevar/harmonics.hpp"
#include "spherevar/kloosterman.hpp"
#include "spherevar/lseries.hpp"
#include "spherevar/modular.hpp"
#include "spherevar/parallel.hpp"
#include "spherevar/variance.hpp"

#ifndef SPHEREVAR_VERSION
#define SPHEREVAR_VERSION "0.0.0"
#endif

namespace {

using json = nlohmann::json;

// Fixed default seed (digits of e) so Monte Carlo runs are reproducible
// without any flags; override with --seed.
constexpr std::uint64_t kDefaultSeed = 271828182845ULL;

// Output-file failures map to exit 3, like capacity errors: the computation
// was valid, the environment refused the result.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }
std::string fmt(std::string v) { return v; }

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const {
        std::string out;
        auto line = [&out](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i != 0) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header);
        for (const auto& row : rows) line(row);
        return out;
    }
};

struct RunContext {
    std::string command_line;
    std::string subcommand;
    json parameters = json::object();
    bool seed_used = false;
    std::uint64_t seed = 0;
    bool workers_used = false;
    int workers = 0;
    std::string out_path;
    std::string config_path;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

// Sidecar path: the output path with its extension replaced by .json, or
// with .meta.json appended when the output itself is a .json file.
std::filesystem::path sidecar_path(const std::filesystem::path& out) {
    std::filesystem::path side = out;
    side.replace_extension(".json");
    if (side == out) side += ".meta.json";
    return side;
}

void emit(const RunContext& ctx, const Table& table) {
    const std::string csv = table.csv();
    if (ctx.out_path.empty()) {
        std::fwrite(csv.data(), 1, csv.size(), stdout);
        return;
    }
    {
        std::ofstream file(ctx.out_path, std::ios::binary);
        if (!file) throw io_error("cannot open output path: " + ctx.out_path);
        file << csv;
        file.flush();
        if (!file) throw io_error("write failed: " + ctx.out_path);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
    json meta;
    meta["command"] = ctx.command_line;
    meta["subcommand"] = ctx.subcommand;
    meta["parameters"] = ctx.parameters;
    if (ctx.seed_used) meta["seed"] = ctx.seed;
    if (ctx.workers_used) meta["workers"] = ctx.workers;
    meta["version"] = SPHEREVAR_VERSION;
    meta["rows"] = table.rows.size();
    meta["columns"] = table.header;
    meta["wall_time_seconds"] = wall;
    const std::filesystem::path side = sidecar_path(ctx.out_path);
    std::ofstream file(side, std::ios::binary);
    if (!file) throw io_error("cannot open sidecar path: " + side.string());
    file << meta.dump(2) << '\n';
    file.flush();
    if (!file) throw io_error("write failed: " + side.string());
}

// Every subcommand shares --out and a flat key=value config file; the file
// is expanded into equivalent --key=value arguments before parsing, skipping
// keys already present on the command line, so flags override it exactly.
void add_common(CLI::App* cmd, std::string& out_path, std::string& config_path) {
    cmd->add_option("--out", out_path, "write CSV here plus a JSON sidecar (default: CSV to stdout)");
    cmd->add_option("--config", config_path,
                    "flat key=value parameter file (keys = long option names); flags override");
}

// key=value lines; blank lines and # comments are skipped. Keys must name a
// long option of the chosen subcommand.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot read config file: " + path);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    auto trim = [](std::string s) {
        const auto first = s.find_first_not_of(" \t\r");
        const auto last = s.find_last_not_of(" \t\r");
        return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
    };
    while (std::getline(file, line)) {
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line is not key=value: " + stripped);
        }
        pairs.emplace_back(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return pairs;
}

// Rewrites `subcommand ... --config FILE ...` by appending --key=value for
// every config key not already given as a flag.
void expand_config(std::vector<std::string>& args, CLI::App* sub) {
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return;
    for (const auto& [key, value] : read_config(path)) {
        if (key == "config") throw std::invalid_argument("config files cannot nest");
        const std::string flag = "--" + key;
        if (sub->get_option_no_throw(flag) == nullptr) {
            throw std::invalid_argument("unknown config key: " + key);
        }
        bool given = false;
        for (std::size_t i = 1; i < args.size() && !given; ++i) {
            given = args[i] == flag || args[i].rfind(flag + "=", 0) == 0;
        }
        if (!given) args.push_back(flag + "=" + value);
    }
}

int list_indices(int j, int dimension, std::vector<int>& out) {
    if (j >= dimension) throw std::domain_error("basis index out of range");
    if (j >= 0) {
        out = {j};
    } else {
        out.resize(static_cast<std::size_t>(dimension));
        for (int i = 0; i < dimension; ++i) out[static_cast<std::size_t>(i)] = i;
    }
    return dimension;
}

// ---------------------------------------------------------------------------
// Subcommand payloads. Each holds its parsed flags and produces one Table.
// ---------------------------------------------------------------------------

struct ShellCmd {
    std::int64_t n = 0;

    void wire(CLI::App* cmd) {
        cmd->add_option("--n", n, "shell radius squared")->required()->check(CLI::NonNegativeNumber);
    }
    Table run(RunContext& ctx) const {
        ctx.parameters = {{"n", n}};
        const spherevar::Shell shell = spherevar::enumerate_shell(n);
        Table t;
        t.header = {"x", "y", "z"};
        for (const auto& p : shell.points) t.rows.push_back({fmt(p[0]), fmt(p[1]), fmt(p[2])});
        ctx.parameters["count"] = shell.count();
        ctx.parameters["eligible"] = shell.eligible();
        return t;
    }
};

struct WeylCmd {
    std::int64_t n = 0;
    int m = 0;
    int j = -1;

    void wire(CLI::App* cmd) {
        cmd->add_option("--n", n, "shell radius squared")->required()->check(CLI::PositiveNumber);
        cmd->add_option("--m", m, "harmonic degree")->required()->check(CLI::Range(0, 128));
        cmd->add_option("--j", j, "basis index (default: all 2m+1)");
    }
    Table run(RunContext& ctx) const {
        ctx.parameters = {{"n", n}, {"m", m}, {"j", j}};
        const spherevar::Shell shell = spherevar::enumerate_shell(n);
        const spherevar::HarmonicBasis basis = spherevar::build_basis(m);
        const spherevar::WeylSumTable sums = spherevar::weyl_sums(shell, basis);
        std::vector<int> indices;
        list_indices(j, basis.dimension(), indices);
        Table t;
        t.header = {"n", "m", "j", "value"};
        for (int idx : indices) {
            t.rows.push_back({fmt(n), fmt(m), fmt(idx), fmt(sums.values[static_cast<std::size_t>(idx)])});
        }
        return t;
    }
};

struct VarianceCmd {
    std::int64_t n = 0;
    double r = 0.0;
    double rho = 0.0;
    std::string method = "spectral";
    int M = 0;
    std::int64_t samples = 1000000;
    std::uint64_t seed = kDefaultSeed;
    int n_theta = 64;
    int n_phi = 128;
    int workers = 0;

    void wire(CLI::App* cmd) {
        cmd->add_option("--n", n, "shell radius squared")->required()->check(CLI::PositiveNumber);
        cmd->add_option("--r", r, "cap radius (radians)")->required();
        cmd->add_option("--rho", rho, "smoothing radius, 0 = sharp counts");
        cmd->add_option("--method", method, "spectral | mc | quadrature")
            ->check(CLI::IsMember({"spectral", "mc", "quadrature"}));
        cmd->add_option("--M", M, "spectral truncation (0: derived from the cap scale)");
        cmd->add_option("--samples", samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "Monte Carlo seed");
        cmd->add_option("--ntheta", n_theta, "quadrature nodes in cos(theta)")->check(CLI::PositiveNumber);
        cmd->add_option("--nphi", n_phi, "quadrature nodes in phi")->check(CLI::PositiveNumber);
        cmd->add_option("--workers", workers, "worker threads (0: SPHERE_LAB_WORKERS or hardware)");
    }
    Table run(RunContext& ctx) const {
        ctx.parameters = {{"n", n},           {"r", r},       {"rho", rho},
                          {"method", method}, {"M", M},       {"samples", samples},
                          {"ntheta", n_theta}, {"nphi", n_phi}};
        const spherevar::Shell shell = spherevar::enumerate_shell(n);
        spherevar::VarianceResult result;
        std::int64_t size_column = 0;
        if (method == "spectral") {
            const int truncation = M > 0 ? M : spherevar::default_truncation(r, rho);
            result = spherevar::variance_spectral(shell, r, rho, truncation);
            size_column = result.truncation;
        } else {
            ctx.workers_used = true;
            ctx.workers = spherevar::resolve_workers(workers);
            spherevar::DirectSampler sampler;
            if (method == "mc") {
                ctx.seed_used = true;
                ctx.seed = seed;
                sampler = spherevar::McSampler{samples, seed};
            } else {
                sampler = spherevar::QuadSampler{n_theta, n_phi};
            }
            result = spherevar::variance_direct(shell, r, rho, sampler, ctx.workers);
            size_column = result.evaluations;
        }
        Table t;
        t.header = {"n", "r", "rho", "method", "M", "value", "error_estimate"};
        t.rows.push_back({fmt(n), fmt(r), fmt(rho), method, fmt(size_column), fmt(result.value),
                          fmt(result.error_estimate)});
        return t;
    }
};

struct AverageCmd {
    std::int64_t X = 0;
    std::int64_t H = -1;
    double delta = 0.0;
    double c = 1.0;
    double rho = 0.0;
    std::string method = "spectral";
    int M = 0;
    std::int64_t samples = 1000000;
    std::uint64_t seed = kDefaultSeed;
    bool complete_sum = false;
    int workers = 0;

    void wire(CLI::App* cmd) {
        cmd->add_option("--x", X, "window anchor X")->required()->check(CLI::PositiveNumber);
        cmd->add_option("--H", H, "window length H (absent: average over [1, X])");
        cmd->add_option("--delta", delta, "cap-area exponent, in (-1, 0)")->required();
        cmd->add_option("--c", c, "cap-area scale, sigma = c X^(delta/2)");
        cmd->add_option("--rho", rho, "smoothing radius, 0 = sharp counts");
        cmd->add_option("--method", method, "spectral | mc")->check(CLI::IsMember({"spectral", "mc"}));
        cmd->add_option("--M", M, "spectral truncation (0: derived from the cap scale)");
        cmd->add_option("--samples", samples, "Monte Carlo samples per shell")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "Monte Carlo seed");
        cmd->add_flag("--complete-sum", complete_sum, "sum over all n in the window, not just eligible n");
        cmd->add_option("--workers", workers, "worker threads (0: SPHERE_LAB_WORKERS or hardware)");
    }
    Table run(RunContext& ctx) const {
        ctx.parameters = {{"x", X},       {"h", H},
                          {"delta", delta}, {"c", c},
                          {"rho", rho},   {"method", method},
                          {"M", M},       {"samples", samples},
                          {"complete_sum", complete_sum}};
        spherevar::AverageOptions options;
        options.X = X;
        options.H = H;
        options.delta = delta;
        options.c = c;
        options.rho = rho;
        options.truncation = M;
        options.complete_sum = complete_sum;
        ctx.workers_used = true;
        ctx.workers = spherevar::resolve_workers(workers);
        options.workers = ctx.workers;
        if (method == "mc") {
            options.method = spherevar::AverageOptions::Method::monte_carlo;
            options.samples = samples;
            options.seed = seed;
            ctx.seed_used = true;
            ctx.seed = seed;
        }
        const spherevar::AverageResult res = spherevar::average_variance(options);
        Table t;
        t.header = {"x", "h", "delta", "c", "rho", "sigma", "cap_radius", "method", "M",
                    "value", "ratio", "tail_total", "lo", "hi", "eligible", "denominator",
                    "window_warning"};
        t.rows.push_back({fmt(res.X), fmt(res.H), fmt(res.delta), fmt(res.c), fmt(res.rho),
                          fmt(res.sigma), fmt(res.cap_radius), method, fmt(res.truncation),
                          fmt(res.value), fmt(res.ratio), fmt(res.tail_total), fmt(res.lo),
                          fmt(res.hi), fmt(res.eligible), fmt(res.denominator),
                          fmt(res.window_warning)});
        return t;
    }
};

struct ConjectureCmd {
    std::int64_t n = 0;
    std::int64_t n_min = 0;
    std::int64_t n_max = 0;
    double r = 0.0;
    CLI::Option* r_option = nullptr;
    double rho = 0.0;
    std::string method = "spectral";
    int M = 0;
    std::int64_t samples = 1000000;
    std::uint64_t seed = kDefaultSeed;
    int workers = 0;

    void wire(CLI::App* cmd) {
        cmd->add_option("--n", n, "single shell")->check(CLI::PositiveNumber);
        cmd->add_option("--n-min", n_min, "sweep start (eligible shells only)")->check(CLI::PositiveNumber);
        cmd->add_option("--n-max", n_max, "sweep end, inclusive")->check(CLI::PositiveNumber);
        r_option = cmd->add_option("--r", r, "cap radius (default: area N^(-1/2) via r = arccos(1-2sigma))");
        cmd->add_option("--rho", rho, "smoothing radius, 0 = sharp counts");
        cmd->add_option("--method", method, "spectral | mc")->check(CLI::IsMember({"spectral", "mc"}));
        cmd->add_option("--M", M, "spectral truncation (0: derived from the cap scale)");
        cmd->add_option("--samples", samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "Monte Carlo seed");
        cmd->add_option("--workers", workers, "worker threads (0: SPHERE_LAB_WORKERS or hardware)");
    }
    Table run(RunContext& ctx) const {
        const bool r_given = r_option != nullptr && r_option->count() > 0;
        const bool sweep = n_min > 0 || n_max > 0;
        if (sweep == (n > 0)) {
            throw std::invalid_argument("give either --n or both --n-min and --n-max");
        }
        if (sweep && (n_min < 1 || n_max < n_min)) {
            throw std::invalid_argument("sweep needs 1 <= n-min <= n-max");
        }
        ctx.parameters = {{"n", n},           {"n_min", n_min}, {"n_max", n_max},
                          {"rho", rho},       {"method", method}, {"M", M},
                          {"samples", samples}};
        if (r_given) ctx.parameters["r"] = r;
        if (method == "mc") {
            ctx.seed_used = true;
            ctx.seed = seed;
            ctx.workers_used = true;
            ctx.workers = spherevar::resolve_workers(workers);
        }
        Table t;
        t.header = {"n", "points", "r", "sigma", "rho", "method", "M", "variance", "ratio"};
        const std::int64_t lo = sweep ? n_min : n;
        const std::int64_t hi = sweep ? n_max : n;
        for (std::int64_t shell_n = lo; shell_n <= hi; ++shell_n) {
            if (sweep && !spherevar::residue_class_member(shell_n)) continue;
            const spherevar::Shell shell = spherevar::enumerate_shell(shell_n);
            const double sigma_default = 1.0 / std::sqrt(static_cast<double>(shell.count()));
            const double radius = r_given ? r : std::acos(1.0 - 2.0 * sigma_default);
            spherevar::VarianceResult res;
            std::int64_t size_column = 0;
            if (method == "spectral") {
                const int truncation = M > 0 ? M : spherevar::default_truncation(radius, rho);
                res = spherevar::variance_spectral(shell, radius, rho, truncation);
                size_column = res.truncation;
            } else {
                res = spherevar::variance_direct(shell, radius, rho,
                                                 spherevar::McSampler{samples, seed}, ctx.workers);
                size_column = res.evaluations;
            }
            const double ratio = spherevar::conjecture_ratio(shell, radius, res);
            t.rows.push_back({fmt(shell_n), fmt(shell.count()), fmt(radius),
                              fmt(spherevar::cap_area(radius)), fmt(rho), method, fmt(size_column),
                              fmt(res.value), fmt(ratio)});
        }
        return t;
    }
};

struct ThetaCoeffCmd {
    int m = 0;
    int j = -1;
    std::int64_t n_max = 50;

    void wire(CLI::App* cmd) {
        cmd->add_option("--m", m, "harmonic degree")->required()->check(CLI::Range(0, 64));
        cmd->add_option("--j", j, "basis index (default: all 2m+1)");
        cmd->add_option("--nmax", n_max, "coefficients through n = nmax")->check(CLI::PositiveNumber);
    }
    Table run(RunContext& ctx) const {
        ctx.parameters = {{"m", m}, {"j", j}, {"nmax", n_max}};
        const spherevar::ThetaFamily family(m);
        family.ensure(n_max);
        std::vector<int> indices;
        list_indices(j, family.dimension(), indices);
        Table t;
        t.header = {"m", "j", "n", "a", "b"};
        for (int idx : indices) {
            for (std::int64_t coeff_n = 1; coeff_n <= n_max; ++coeff_n) {
                t.rows.push_back({fmt(m), fmt(idx), fmt(coeff_n),
                                  fmt(family.coefficient(idx, coeff_n)),
                                  fmt(family.normalized_coefficient(idx, coeff_n))});
            }
        }
        return t;
    }
};

struct ThetaL2Cmd {
    int m = 0;
    int j = -1;

    void wire(CLI::App* cmd) {
        cmd->add_option("--m", m, "harmonic degree")->required()->check(CLI::Range(0, 64));
        cmd->add_option("--j", j, "basis index (default: all 2m+1)");
    }
    Table run(RunContext& ctx) const {
        ctx.parameters = {{"m", m}, {"j", j}};
        const spherevar::ThetaFamily family(m);
        std::vector<int> indices;
        list_indices(j, family.dimension(), indices);
        Table t;
        t.header = {"m", "j", "weight", "value"};
        for (int idx : indices) {
            t.rows.push_back({fmt(m), fmt(idx), fmt(family.weight()),
                              fmt(family.l2_norm_squared(idx))});
        }
        return t;
    }
};

struct RankinSelbergCmd {
    int m = 0;
    int j = 0;
    double s = 0.0;
    std::int64_t N = 200;

    void wire(CLI::App* cmd) {
        cmd->add_option("--m", m, "harmonic degree")->required()->check(CLI::Range(0, 64));
        cmd->add_option("--j", j, "basis index")->required()->check(CLI::NonNegativeNumber);
        cmd->add_option("--s", s, "spectral parameter, s > 1")->required();
        cmd->add_option("--N", N, "series truncation")->check(CLI::PositiveNumber);
    }
    Table run(RunContext& ctx) const {
        ctx.parameters = {{"m", m}, {"j", j}, {"s", s}, {"N", N}};
        const spherevar::ThetaFamily family(m);
        const spherevar::RankinSelbergResult res = spherevar::rankin_selberg_check(family, j, s, N);
        Table t;
        t.header = {"m", "j", "s", "N", "lhs", "rhs", "relative_difference"};
        t.rows.push_back({fmt(m), fmt(j), fmt(s), fmt(N), fmt(res.lhs), fmt(res.rhs),
                          fmt(res.relative_difference)});
        return t;
    }
};

struct KloostermanCmd {
    std::int64_t a = 1;
    std::int64_t b = 1;
    std::int64_t c = 0;
    int two_k = 5;

    void wire(CLI::App* cmd) {
        cmd->add_option("--a", a, "first frequency");
        cmd->add_option("--b", b, "second frequency");
        cmd->add_option("--c", c, "modulus, a positive multiple of 4")->required();
        cmd->add_option("--two-k", two_k, "doubled weight, odd")->check(CLI::PositiveNumber);
    }
    Table run(RunContext& ctx) const {
        ctx.parameters = {{"a", a}, {"b", b}, {"c", c}, {"two_k", two_k}};
        const std::complex<double> value = spherevar::kloosterman_sum(a, b, c, two_k);
        Table t;
        t.header = {"a", "b", "c", "two_k", "real", "imag", "abs", "bound", "margin"};
        // The Weil-type bound and its margin are stated for the diagonal sum
        // K(n, n; c); off the diagonal those cells stay empty.
        std::string bound_cell, margin_cell;
        if (a == b) {
            bound_cell = fmt(spherevar::kloosterman_bound(a, c));
            margin_cell = fmt(spherevar::kloosterman_bound_margin(a, c, two_k));
        }
        t.rows.push_back({fmt(a), fmt(b), fmt(c), fmt(two_k), fmt(value.real()), fmt(value.imag()),
                          fmt(std::abs(value)), bound_cell, margin_cell});
        return t;
    }
};

struct PeterssonCmd {
    int m = 0;
    int j = 0;
    std::int64_t n = 0;
    std::int64_t c_max = 400;

    void wire(CLI::App* cmd) {
        cmd->add_option("--m", m, "harmonic degree")->required()->check(CLI::Range(0, 64));
        cmd->add_option("--j", j, "basis index")->required()->check(CLI::NonNegativeNumber);
        cmd->add_option("--n", n, "coefficient index")->required()->check(CLI::PositiveNumber);
        cmd->add_option("--cmax", c_max, "modulus cutoff for the bracket sum")->check(CLI::PositiveNumber);
    }
    Table run(RunContext& ctx) const {
        ctx.parameters = {{"m", m}, {"j", j}, {"n", n}, {"cmax", c_max}};
        const spherevar::ThetaFamily family(m);
        const spherevar::PeterssonCheck res = spherevar::petersson_bound_check(family, j, n, c_max);
        Table t;
        t.header = {"m", "j", "n", "c_max", "lhs", "rhs", "tail", "margin"};
        t.rows.push_back({fmt(m), fmt(j), fmt(n), fmt(c_max), fmt(res.lhs), fmt(res.rhs),
                          fmt(res.tail), fmt(res.margin)});
        return t;
    }
};

struct LseriesCmd {
    int m = 0;
    int j = 0;
    double s = 0.0;
    std::int64_t N = 2000;

    void wire(CLI::App* cmd) {
        cmd->add_option("--m", m, "harmonic degree")->required()->check(CLI::Range(0, 64));
        cmd->add_option("--j", j, "basis index")->required()->check(CLI::NonNegativeNumber);
        cmd->add_option("--s", s, "evaluation point, s > 1")->required();
        cmd->add_option("--N", N, "series truncation")->check(CLI::PositiveNumber);
    }
    Table run(RunContext& ctx) const {
        ctx.parameters = {{"m", m}, {"j", j}, {"s", s}, {"N", N}};
        const spherevar::ThetaFamily family(m);
        const spherevar::DirichletPartial head = spherevar::dirichlet_partial(family, j, s, N);
        const double lambda = spherevar::completed_lambda_partial(family, j, s, N);
        Table t;
        t.header = {"m", "j", "s", "N", "value", "tail_bound", "lambda"};
        t.rows.push_back({fmt(m), fmt(j), fmt(s), fmt(N), fmt(head.value), fmt(head.tail_bound),
                          fmt(lambda)});
        return t;
    }
};

struct FxCmd {
    std::int64_t X = 0;
    int m = 0;

    void wire(CLI::App* cmd) {
        cmd->add_option("--x", X, "sum over n <= X")->required()->check(CLI::PositiveNumber);
        cmd->add_option("--m", m, "harmonic degree")->required()->check(CLI::Range(0, 64));
    }
    Table run(RunContext& ctx) const {
        ctx.parameters = {{"x", X}, {"m", m}};
        Table t;
        t.header = {"x", "m", "value"};
        t.rows.push_back({fmt(X), fmt(m), fmt(spherevar::fx_sum(X, m))});
        return t;
    }
};

struct ResidueCmd {
    int m = 0;
    int j = 0;
    std::int64_t X = 1000;

    void wire(CLI::App* cmd) {
        cmd->add_option("--m", m, "harmonic degree")->required()->check(CLI::Range(0, 64));
        cmd->add_option("--j", j, "basis index")->required()->check(CLI::NonNegativeNumber);
        cmd->add_option("--x", X, "Cesaro cutoff, X >= 100");
    }
    Table run(RunContext& ctx) const {
        ctx.parameters = {{"m", m}, {"j", j}, {"x", X}};
        const spherevar::ThetaFamily family(m);
        const spherevar::ResidueEstimate res = spherevar::residue_estimate(family, j, X);
        Table t;
        t.header = {"m", "j", "x", "raw", "c_hat"};
        t.rows.push_back({fmt(m), fmt(j), fmt(X), fmt(res.raw), fmt(res.c_hat)});
        return t;
    }
};

}  // namespace

int main(int argc, char** argv) {
    std::string command_line;
    for (int i = 0; i < argc; ++i) {
        if (i != 0) command_line += ' ';
        command_line += argv[i];
    }

    CLI::App app{"sphere-lab: lattice points on spheres — shells, cap-count variance, "
                 "windowed averages, and the theta-series machinery behind them"};
    app.set_version_flag("--version", SPHEREVAR_VERSION);
    app.require_subcommand(0, 1);

    ShellCmd shell_cmd;
    WeylCmd weyl_cmd;
    VarianceCmd variance_cmd;
    AverageCmd average_cmd;
    ConjectureCmd conjecture_cmd;
    ThetaCoeffCmd theta_coeff_cmd;
    ThetaL2Cmd theta_l2_cmd;
    RankinSelbergCmd rankin_cmd;
    KloostermanCmd kloosterman_cmd;
    PeterssonCmd petersson_cmd;
    LseriesCmd lseries_cmd;
    FxCmd fx_cmd;
    ResidueCmd residue_cmd;

    RunContext ctx;
    ctx.command_line = command_line;
    std::function<Table(RunContext&)> task;
    std::map<std::string, CLI::App*> sub_by_name;

    auto wire = [&](const char* name, const char* description, auto& payload) {
        CLI::App* cmd = app.add_subcommand(name, description);
        add_common(cmd, ctx.out_path, ctx.config_path);
        payload.wire(cmd);
        cmd->callback([&ctx, &task, &payload, name] {
            ctx.subcommand = name;
            task = [&payload](RunContext& c) { return payload.run(c); };
        });
        sub_by_name[name] = cmd;
        return cmd;
    };

    wire("shell", "enumerate the lattice points with |x|^2 = n", shell_cmd);
    wire("weyl", "Weyl sums W_{m,j}(n) over one shell", weyl_cmd);
    wire("variance", "cap-count variance for one shell, direct or spectral", variance_cmd);
    wire("average", "windowed average of cap-count variances", average_cmd);
    wire("conjecture", "variance / (N sigma): the expected-order ratio", conjecture_cmd);
    wire("theta-coeff", "theta coefficients a(n) and b(n) = a(n) n^{-(k-1)/2}", theta_coeff_cmd);
    wire("theta-l2", "squared L2 norm over the level-4 fundamental domain", theta_l2_cmd);
    wire("rankin-selberg", "truncation-consistent unfolding identity check", rankin_cmd);
    wire("kloosterman", "one twisted Kloosterman sum with its Weil-type bound", kloosterman_cmd);
    wire("petersson", "single-element Bessel-inequality check on theta coefficients", petersson_cmd);
    wire("lseries", "partial Rankin-Selberg Dirichlet series and completed head", lseries_cmd);
    wire("fx", "full-basis second-moment sum over n <= X", fx_cmd);
    wire("residue", "Cesaro residue estimate at s = 1", residue_cmd);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (!args.empty()) {
            const auto found = sub_by_name.find(args.front());
            if (found != sub_by_name.end()) expand_config(args, found->second);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (!task) {
        std::fputs(app.help().c_str(), stderr);
        return 2;
    }

    try {
        const Table table = task(ctx);
        emit(ctx, table);
        return 0;
    } catch (const spherevar::capacity_error& e) {
        std::fprintf(stderr, "capacity error: %s\n", e.what());
        return 3;
    } catch (const io_error& e) {
        std::fprintf(stderr, "output error: %s\n", e.what());
        return 3;
    } catch (const std::bad_alloc&) {
        std::fprintf(stderr, "allocation failure\n");
        return 3;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
