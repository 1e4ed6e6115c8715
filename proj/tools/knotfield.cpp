// knotfield command-line front end. Talks to the library only through knotfield.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "knotfield/knotfield.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitEval = 1;
constexpr int kExitUsage = 2;

struct Failure {
    int code;
    std::string message;
};

void check(kf_status s, const std::string& what) {
    if (s != KF_OK) throw Failure{kExitEval, what + ": " + kf_status_name(s) + ": " + kf_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using LinkPtr = std::unique_ptr<kf_link, Deleter<kf_link, kf_link_free>>;
using ScalarPtr = std::unique_ptr<kf_scalar_field, Deleter<kf_scalar_field, kf_scalar_field_free>>;
using VectorPtr = std::unique_ptr<kf_vector_field, Deleter<kf_vector_field, kf_vector_field_free>>;
using FramingPtr = std::unique_ptr<kf_framing, Deleter<kf_framing, kf_framing_free>>;

std::string take_string(char* s) {
    std::string out = s ? s : "";
    kf_string_free(s);
    return out;
}

template <std::size_t N>
std::array<double, N> parse_list(const std::string& text, const char* flag) {
    std::array<double, N> out{};
    std::stringstream ss(text);
    std::string item;
    std::size_t n = 0;
    while (std::getline(ss, item, ',')) {
        if (n == N) break;
        try {
            std::size_t used = 0;
            out[n] = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Failure{kExitUsage, std::string(flag) + ": '" + item + "' is not a number"};
        }
        ++n;
    }
    if (n != N || ss.rdbuf()->in_avail() > 0) {
        throw Failure{kExitUsage, std::string(flag) + " expects " + std::to_string(N) + " comma-separated values"};
    }
    return out;
}

// Options shared by the commands that evaluate omega.
struct EvalOptions {
    std::string evaluator = "infinity_triangle";
    std::string ninf = "0,0,1";
    double threshold = 0.05;
    std::uint64_t seed = 0;

    void add(CLI::App* cmd) {
        cmd->add_option("--evaluator", evaluator,
                        "infinity_triangle | infinity_quadrature | tangent_dev_plus | tangent_dev_minus | gauss_bonnet");
        cmd->add_option("--ninf", ninf, "Dirac-string direction x,y,z (normalised)");
        cmd->add_option("--threshold", threshold, "axis switch threshold on 1 + n . n_inf");
        cmd->add_option("--seed", seed, "seed for the random fallback axis");
    }

    kf_eval_config config() const {
        kf_eval_config cfg;
        kf_eval_config_default(&cfg);
        if (kf_evaluator_from_name(evaluator.c_str(), &cfg.evaluator) != KF_OK) {
            throw Failure{kExitUsage, "--evaluator: " + std::string(kf_last_error())};
        }
        const auto n = parse_list<3>(ninf, "--ninf");
        const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        if (!(len > 0.0)) throw Failure{kExitUsage, "--ninf must be nonzero"};
        for (int i = 0; i < 3; ++i) cfg.n_inf[i] = n[i] / len;
        cfg.switch_threshold = threshold;
        cfg.fallback_seed = seed;
        return cfg;
    }

    json to_json() const {
        const kf_eval_config c = config();
        return {{"evaluator", evaluator},
                {"n_inf", {c.n_inf[0], c.n_inf[1], c.n_inf[2]}},
                {"threshold", threshold},
                {"seed", seed}};
    }
};

struct GridOptions {
    std::string grid;
    std::string origin;
    double spacing = 0.0;

    void add(CLI::App* cmd) {
        cmd->add_option("--grid", grid, "node counts NX,NY,NZ")->required();
        cmd->add_option("--origin", origin, "position of node (0,0,0) as x,y,z")->required();
        cmd->add_option("--spacing", spacing, "isotropic node spacing")->required();
    }

    kf_grid get() const {
        kf_grid g{};
        const auto d = parse_list<3>(grid, "--grid");
        for (int i = 0; i < 3; ++i) {
            if (d[i] < 2 || d[i] != std::floor(d[i]) || d[i] > 1e5) {
                throw Failure{kExitUsage, "--grid entries must be integers of at least 2"};
            }
            g.dims[i] = static_cast<size_t>(d[i]);
        }
        const auto o = parse_list<3>(origin, "--origin");
        for (int i = 0; i < 3; ++i) g.origin[i] = o[i];
        if (!(spacing > 0.0)) throw Failure{kExitUsage, "--spacing must be positive"};
        g.spacing = spacing;
        return g;
    }
};

struct Common {
    std::string curve;
    std::string out;
    double resample = 0.0;
    unsigned workers = 0;

    void add(CLI::App* cmd, bool needs_out = true) {
        cmd->add_option("--curve", curve, "curve file")->required();
        if (needs_out) cmd->add_option("--out", out, "output base path")->required();
        cmd->add_option("--resample", resample, "resample every component to this arclength spacing first");
        cmd->add_option("--workers", workers, "worker threads (0 = all cores); results do not depend on it");
    }
};

LinkPtr load(const Common& c) {
    kf_link* raw = nullptr;
    check(kf_link_load(c.curve.c_str(), &raw), "loading " + c.curve);
    LinkPtr link(raw);
    if (c.resample > 0.0) {
        kf_link* r = nullptr;
        check(kf_link_resample(link.get(), c.resample, &r), "resampling");
        link.reset(r);
    }
    return link;
}

std::string hash_of(const kf_link* link) {
    char h[65];
    check(kf_link_hash(link, h), "hashing");
    return h;
}

json grid_json(const kf_grid& g) {
    return {{"dims", {g.dims[0], g.dims[1], g.dims[2]}},
            {"origin", {g.origin[0], g.origin[1], g.origin[2]}},
            {"spacing", g.spacing}};
}

json base_manifest(const std::string& command, const std::vector<std::string>& argv, const Common& c,
                   const kf_link* link) {
    json m;
    m["tool"] = "knotfield";
    m["version"] = kf_version();
    m["command"] = command;
    m["argv"] = argv;
    m["curve_file"] = c.curve;
    m["curve_hash"] = hash_of(link);
    m["components"] = kf_link_components(link);
    m["resample"] = c.resample;
    m["workers"] = c.workers;
    return m;
}

void finish_manifest(json& m, const std::string& base, std::chrono::steady_clock::time_point t0) {
    m["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream f(base + ".manifest.json", std::ios::binary | std::ios::trunc);
    if (!f) throw Failure{kExitEval, "cannot write " + base + ".manifest.json"};
    f << m.dump(2) << "\n";
}

json volume_layout() {
    return {{"raw", {{"type", "float64"}, {"byte_order", "little-endian"}, {"order", "row-major, k fastest"}}},
            {"vti-legacy", {{"type", "double"}, {"byte_order", "big-endian"}, {"order", "x fastest"}}}};
}

std::vector<double> read_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Failure{kExitEval, "cannot open points file " + path};
    std::vector<double> xyz;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        double v[3];
        if (!(ls >> v[0])) continue;
        if (!(ls >> v[1] >> v[2])) throw Failure{kExitEval, path + " line " + std::to_string(lineno) + ": expected x y z"};
        xyz.insert(xyz.end(), v, v + 3);
    }
    return xyz;
}

int run_omega(const Common& c, const EvalOptions& e, const GridOptions& g, const std::string& points,
              const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    const kf_eval_config cfg = e.config();
    auto link = load(c);
    json m = base_manifest("omega", argv, c, link.get());
    m["config"] = e.to_json();

    if (!points.empty()) {
        const auto xyz = read_points(points);
        std::vector<double> out(xyz.size() / 3);
        check(kf_omega_points(link.get(), xyz.data(), out.size(), &cfg, c.workers, out.data()), "omega");
        std::string text = "# x y z omega\n";
        char buf[128];
        std::size_t sentinels = 0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2], out[i]);
            text += buf;
            if (out[i] < 0.0) ++sentinels;
        }
        std::ofstream f(c.out + ".points.txt", std::ios::binary | std::ios::trunc);
        f << text;
        m["points_file"] = points;
        m["outputs"] = {c.out + ".points.txt"};
        m["sentinel_points"] = sentinels;
        finish_manifest(m, c.out, t0);
        return 0;
    }

    const kf_grid grid = g.get();
    kf_scalar_field* raw = nullptr;
    check(kf_omega_grid(link.get(), &grid, &cfg, c.workers, &raw), "omega");
    ScalarPtr field(raw);
    check(kf_scalar_field_write(field.get(), c.out.c_str(), "omega"), "writing");
    m["grid"] = grid_json(grid);
    m["evaluator"] = e.evaluator;
    m["field"] = json::parse(take_string([&] {
        char* s = nullptr;
        check(kf_scalar_field_meta_json(field.get(), &s), "metadata");
        return s;
    }()));
    m["layout"] = volume_layout();
    m["outputs"] = {c.out + ".vti-legacy", c.out + ".raw"};
    finish_manifest(m, c.out, t0);
    for (const auto& w : m["field"]["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
    if (kf_scalar_field_sentinel_count(field.get()) > 0) {
        std::cerr << "warning: " << kf_scalar_field_sentinel_count(field.get())
                  << " nodes lie on the curve and hold the sentinel value\n";
    }
    return 0;
}

int run_framing(const Common& c, const EvalOptions& e, double eps_rel, long component,
                const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    const kf_eval_config cfg = e.config();
    auto link = load(c);
    json m = base_manifest("framing", argv, c, link.get());
    m["config"] = e.to_json();
    m["eps_rel"] = eps_rel;

    const std::size_t ncomp = kf_link_components(link.get());
    std::vector<std::size_t> todo;
    if (component >= 0) {
        if (static_cast<std::size_t>(component) >= ncomp) throw Failure{kExitUsage, "--component out of range"};
        todo.push_back(static_cast<std::size_t>(component));
    } else {
        for (std::size_t i = 0; i < ncomp; ++i) todo.push_back(i);
    }

    std::string table = "# component s alpha x y z\n";
    json framings = json::array();
    char buf[192];
    for (std::size_t comp : todo) {
        double rho = 0.0;
        check(kf_link_min_radius_of_curvature(link.get(), comp, &rho), "curvature");
        kf_framing* raw = nullptr;
        check(kf_framing_compute(link.get(), comp, eps_rel * rho, &cfg, c.workers, &raw),
              "framing component " + std::to_string(comp));
        FramingPtr fr(raw);
        const std::size_t n = kf_framing_size(fr.get());
        std::vector<double> s(n), alpha(n), xyz(3 * n);
        check(kf_framing_table(fr.get(), s.data(), alpha.data(), xyz.data()), "framing table");
        for (std::size_t i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, "%zu %.17g %.17g %.17g %.17g %.17g\n", comp, s[i], alpha[i], xyz[3 * i],
                          xyz[3 * i + 1], xyz[3 * i + 2]);
            table += buf;
        }
        long sl = 0;
        check(kf_framing_self_link(fr.get(), &sl), "self-link");
        framings.push_back({{"component", comp},
                            {"epsilon", kf_framing_epsilon(fr.get())},
                            {"alpha_winding", kf_framing_alpha_winding(fr.get())},
                            {"self_link", sl}});
    }
    std::ofstream f(c.out + ".framing.txt", std::ios::binary | std::ios::trunc);
    f << table;
    m["framings"] = framings;
    if (framings.size() == 1) m["self_link"] = framings[0]["self_link"];
    m["outputs"] = {c.out + ".framing.txt"};
    finish_manifest(m, c.out, t0);
    return 0;
}

int run_scroll(const Common& c, const EvalOptions& e, const GridOptions& g, double k, const std::string& modulate,
               const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    const kf_eval_config cfg = e.config();
    const kf_grid grid = g.get();
    auto link = load(c);
    json m = base_manifest("scroll", argv, c, link.get());
    m["config"] = e.to_json();
    m["k"] = k;
    if (!modulate.empty()) m["modulation_file"] = modulate;
    kf_scalar_field* raw = nullptr;
    check(kf_scroll_field(link.get(), &grid, k, &cfg, modulate.empty() ? nullptr : modulate.c_str(), c.workers, &raw),
          "scroll");
    ScalarPtr field(raw);
    check(kf_scalar_field_write(field.get(), c.out.c_str(), "psi"), "writing");
    char* meta = nullptr;
    check(kf_scalar_field_meta_json(field.get(), &meta), "metadata");
    m["grid"] = grid_json(grid);
    m["evaluator"] = e.evaluator;
    m["field"] = json::parse(take_string(meta));
    m["layout"] = volume_layout();
    m["outputs"] = {c.out + ".vti-legacy", c.out + ".raw"};
    finish_manifest(m, c.out, t0);
    return 0;
}

int run_director(const Common& c, const EvalOptions& e, const GridOptions& g, const std::string& second,
                 const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    const kf_eval_config cfg = e.config();
    const kf_grid grid = g.get();
    auto link = load(c);
    json m = base_manifest("director", argv, c, link.get());
    m["config"] = e.to_json();

    kf_scalar_field* raw = nullptr;
    check(kf_omega_grid(link.get(), &grid, &cfg, c.workers, &raw), "omega");
    ScalarPtr wk(raw);
    kf_vector_field* vraw = nullptr;
    if (second.empty()) {
        check(kf_planar_director(wk.get(), &vraw), "director");
    } else {
        Common sc = c;
        sc.curve = second;
        auto l2 = load(sc);
        m["second_curve_file"] = second;
        m["second_curve_hash"] = hash_of(l2.get());
        m["second_components"] = kf_link_components(l2.get());
        kf_scalar_field* r2 = nullptr;
        check(kf_omega_grid(l2.get(), &grid, &cfg, c.workers, &r2), "omega of second curve");
        ScalarPtr wl(r2);
        check(kf_full_director(wk.get(), wl.get(), &vraw), "director");
    }
    VectorPtr d(vraw);
    check(kf_vector_field_write(d.get(), c.out.c_str()), "writing");
    char* meta = nullptr;
    check(kf_vector_field_meta_json(d.get(), &meta), "metadata");
    m["grid"] = grid_json(grid);
    m["evaluator"] = e.evaluator;
    m["field"] = json::parse(take_string(meta));
    m["arrays"] = {"dx", "dy", "dz"};
    m["layout"] = volume_layout();
    m["layout"]["raw"]["order"] = "row-major, k fastest, (dx, dy, dz) interleaved per node";
    m["outputs"] = {c.out + ".vti-legacy", c.out + ".raw"};
    finish_manifest(m, c.out, t0);
    return 0;
}

int run_verify(const std::string& curve, std::size_t points, std::uint64_t seed, const std::string& out) {
    char* report = nullptr;
    int passed = 0;
    check(kf_verify_file(curve.c_str(), points, seed, &report, &passed), "verify");
    const std::string text = take_string(report);
    std::cout << text;
    if (!out.empty()) {
        std::ofstream f(out, std::ios::binary | std::ios::trunc);
        f << text;
    }
    return passed ? 0 : kExitEval;
}

int run_generate(const std::string& name, std::size_t points, const std::string& out) {
    kf_link* raw = nullptr;
    check(kf_link_generate(name.c_str(), points, &raw), "generate");
    LinkPtr link(raw);
    check(kf_link_save(link.get(), out.c_str()), "writing " + out);
    return 0;
}

int dispatch(int argc, char** argv);

int run_rerun(const std::string& manifest, const std::string& out) {
    std::ifstream in(manifest);
    if (!in) throw Failure{kExitEval, "cannot open " + manifest};
    json m;
    try {
        m = json::parse(in);
    } catch (const std::exception& e) {
        throw Failure{kExitEval, manifest + ": " + e.what()};
    }
    if (!m.contains("argv") || !m["argv"].is_array()) throw Failure{kExitEval, manifest + " has no argv"};
    std::vector<std::string> args{"knotfield"};
    for (const auto& a : m["argv"]) args.push_back(a.get<std::string>());
    if (!out.empty()) {
        for (std::size_t i = 1; i + 1 < args.size(); ++i) {
            if (args[i] == "--out") args[i + 1] = out;
        }
    }
    std::vector<char*> cargv;
    for (auto& a : args) cargv.push_back(a.data());
    return dispatch(static_cast<int>(cargv.size()), cargv.data());
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Solid angle fields of knots and links"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kf_version());

    Common common;
    EvalOptions eval;
    GridOptions grid;

    auto* omega = app.add_subcommand("omega", "omega on a grid or at listed points");
    std::string points;
    common.add(omega);
    eval.add(omega);
    omega->add_option("--grid", grid.grid, "node counts NX,NY,NZ");
    omega->add_option("--origin", grid.origin, "position of node (0,0,0) as x,y,z");
    omega->add_option("--spacing", grid.spacing, "isotropic node spacing");
    omega->add_option("--points", points, "file of 'x y z' lines; evaluate there instead of on a grid");

    auto* framing = app.add_subcommand("framing", "solid-angle framing and its self-linking number");
    double eps_rel = 0.02;
    long component = -1;
    framing->add_option("--curve", common.curve, "curve file")->required();
    framing->add_option("--out", common.out, "output base path")->required();
    framing->add_option("--resample", common.resample, "resample spacing");
    framing->add_option("--workers", common.workers, "worker threads");
    framing->add_option("--eps-rel", eps_rel, "tube radius relative to the minimum radius of curvature");
    framing->add_option("--component", component, "frame only this component");
    eval.add(framing);

    auto* scroll = app.add_subcommand("scroll", "scroll-wave phase");
    double k = 0.0;
    std::string modulate;
    Common scommon;
    GridOptions sgrid;
    scommon.add(scroll);
    eval.add(scroll);
    sgrid.add(scroll);
    scroll->add_option("--k", k, "wavenumber")->required();
    scroll->add_option("--modulate", modulate, "table of 's m' lines: arclength offset");

    auto* director = app.add_subcommand("director", "nematic director field");
    std::string second;
    Common dcommon;
    GridOptions dgrid;
    dcommon.add(director);
    eval.add(director);
    dgrid.add(director);
    director->add_option("--second-curve", second, "curve whose omega sets the in-plane angle");

    auto* verify = app.add_subcommand("verify", "run the consistency suite on a curve");
    std::string vcurve;
    std::string vout;
    std::size_t vpoints = 256;
    std::uint64_t vseed = 1;
    verify->add_option("--curve", vcurve, "curve file")->required();
    verify->add_option("--points", vpoints, "number of random evaluation points");
    verify->add_option("--seed", vseed, "seed");
    verify->add_option("--out", vout, "also write the report here");

    auto* generate = app.add_subcommand("generate", "write a built-in curve");
    std::string gname;
    std::string gout;
    std::size_t gpoints = 400;
    generate->add_option("--name", gname, std::string("one of: ") + kf_link_generate_names())->required();
    generate->add_option("--points", gpoints, "vertices per component");
    generate->add_option("--out", gout, "curve file to write")->required();

    auto* rerun = app.add_subcommand("rerun", "repeat the run recorded in a manifest");
    std::string manifest;
    std::string rout;
    rerun->add_option("manifest", manifest, "manifest.json")->required();
    rerun->add_option("--out", rout, "replace the output base");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    std::vector<std::string> args(argv + 1, argv + argc);
    if (*omega) {
        const bool has_grid = !grid.grid.empty() || !grid.origin.empty() || grid.spacing != 0.0;
        if (points.empty() == !has_grid) throw Failure{kExitUsage, "omega needs either --points or --grid/--origin/--spacing"};
        if (has_grid && (grid.grid.empty() || grid.origin.empty())) {
            throw Failure{kExitUsage, "--grid, --origin and --spacing go together"};
        }
        return run_omega(common, eval, grid, points, args);
    }
    if (*framing) {
        if (!(eps_rel > 0.0)) throw Failure{kExitUsage, "--eps-rel must be positive"};
        return run_framing(common, eval, eps_rel, component, args);
    }
    if (*scroll) return run_scroll(scommon, eval, sgrid, k, modulate, args);
    if (*director) return run_director(dcommon, eval, dgrid, second, args);
    if (*verify) return run_verify(vcurve, vpoints, vseed, vout);
    if (*generate) return run_generate(gname, gpoints, gout);
    if (*rerun) return run_rerun(manifest, rout);
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const Failure& f) {
        std::cerr << "knotfield: " << f.message << "\n";
        if (f.code == kExitUsage) std::cerr << "Run with --help for usage.\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "knotfield: " << e.what() << "\n";
        return kExitEval;
    }
}
