#include "knotfield/knotfield.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <json.hpp>
#include <memory>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>

#include "knotfield/curve.hpp"
#include "knotfield/error.hpp"
#include "knotfield/fields.hpp"
#include "knotfield/framing.hpp"
#include "knotfield/io.hpp"
#include "knotfield/knots.hpp"
#include "knotfield/solidangle.hpp"
#include "knotfield/spherical.hpp"
#include "knotfield/verify.hpp"

using namespace knotfield;
using json = nlohmann::ordered_json;

struct kf_link {
    Link link;
};
struct kf_scalar_field {
    ScalarField field;
};
struct kf_vector_field {
    VectorField field;
};
struct kf_framing {
    Framing framing;
};

namespace {

thread_local std::string g_last_error;

struct NullArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

kf_status status_of(ErrorKind k) {
    switch (k) {
        case ErrorKind::parse: return KF_ERR_PARSE;
        case ErrorKind::validation: return KF_ERR_VALIDATION;
        case ErrorKind::resolution: return KF_ERR_RESOLUTION;
        case ErrorKind::degenerate: return KF_ERR_DEGENERATE;
        case ErrorKind::domain: return KF_ERR_DOMAIN;
        case ErrorKind::io: return KF_ERR_IO;
    }
    return KF_ERR_INTERNAL;
}

template <class Fn>
kf_status guard(Fn&& fn) {
    g_last_error.clear();
    try {
        fn();
        return KF_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const NullArgument& e) {
        g_last_error = e.what();
        return KF_ERR_NULL;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return KF_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return KF_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) throw NullArgument(std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

EvalConfig to_cfg(const kf_eval_config* c) {
    EvalConfig cfg;
    if (c) {
        cfg.n_inf = {c->n_inf[0], c->n_inf[1], c->n_inf[2]};
        cfg.switch_threshold = c->switch_threshold;
        cfg.fallback_seed = c->fallback_seed;
        if (c->evaluator < KF_EVAL_INFINITY_TRIANGLE || c->evaluator > KF_EVAL_GAUSS_BONNET) {
            throw Error(ErrorKind::domain, "unknown evaluator id " + std::to_string(int(c->evaluator)));
        }
        cfg.evaluator = static_cast<Evaluator>(c->evaluator);
    }
    cfg.validate();
    return cfg;
}

GridSpec to_grid(const kf_grid* g) {
    need(g, "grid");
    GridSpec grid;
    grid.origin = {g->origin[0], g->origin[1], g->origin[2]};
    grid.spacing = g->spacing;
    grid.dims = {g->dims[0], g->dims[1], g->dims[2]};
    grid.validate();
    return grid;
}

const OrientedCurve& component_of(const kf_link* l, size_t c) {
    need(l, "link");
    if (c >= l->link.size()) throw Error(ErrorKind::domain, "no component " + std::to_string(c));
    return l->link[c];
}

Vec3 vec(const double* x) {
    need(x, "point");
    return {x[0], x[1], x[2]};
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json meta_json(const Provenance& m, const GridSpec& g, const std::vector<std::size_t>& sentinels) {
    json j;
    j["quantity"] = m.quantity;
    if (!m.evaluator.empty()) j["evaluator"] = m.evaluator;
    j["curve_hash"] = m.curve_hash;
    j["components"] = m.components;
    j["grid"] = {{"dims", {g.dims[0], g.dims[1], g.dims[2]}},
                 {"origin", vec_json(g.origin)},
                 {"spacing", g.spacing}};
    if (!m.evaluator.empty()) {
        j["config"] = {{"n_inf", vec_json(m.config.n_inf)},
                       {"switch_threshold", m.config.switch_threshold},
                       {"fallback_seed", m.config.fallback_seed},
                       {"fallback_axis", vec_json(m.fallback_axis)}};
        j["axis_usage"] = {{"flipped", m.flipped_axis_nodes},
                           {"random", m.random_axis_nodes},
                           {"below_threshold", m.below_threshold_nodes}};
    }
    j["warnings"] = m.warnings;
    j["sentinel_value"] = kSentinel;
    j["sentinel_nodes"] = sentinels;
    return j;
}

}  // namespace

extern "C" {

const char* kf_last_error(void) { return g_last_error.c_str(); }

const char* kf_version(void) { return "0.1.0"; }

const char* kf_status_name(kf_status s) {
    switch (s) {
        case KF_OK: return "ok";
        case KF_ERR_PARSE: return "parse error";
        case KF_ERR_VALIDATION: return "validation error";
        case KF_ERR_RESOLUTION: return "resolution error";
        case KF_ERR_DEGENERATE: return "degenerate configuration";
        case KF_ERR_DOMAIN: return "domain error";
        case KF_ERR_IO: return "i/o error";
        case KF_ERR_NULL: return "null argument";
        case KF_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void kf_eval_config_default(kf_eval_config* c) {
    if (!c) return;
    const EvalConfig d;
    c->n_inf[0] = d.n_inf.x;
    c->n_inf[1] = d.n_inf.y;
    c->n_inf[2] = d.n_inf.z;
    c->switch_threshold = d.switch_threshold;
    c->fallback_seed = d.fallback_seed;
    c->evaluator = KF_EVAL_INFINITY_TRIANGLE;
}

kf_status kf_evaluator_from_name(const char* name, kf_evaluator* out) {
    return guard([&] {
        need(name, "name");
        need(out, "out");
        *out = static_cast<kf_evaluator>(parse_evaluator(name));
    });
}

const char* kf_evaluator_name(kf_evaluator e) {
    if (e < KF_EVAL_INFINITY_TRIANGLE || e > KF_EVAL_GAUSS_BONNET) return "unknown";
    return to_string(static_cast<Evaluator>(e)).data();
}

void kf_string_free(char* s) { std::free(s); }

kf_status kf_link_load(const char* path, kf_link** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new kf_link{load_link(path)};
    });
}

kf_status kf_link_parse(const char* text, kf_link** out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = new kf_link{parse_link(text)};
    });
}

kf_status kf_link_generate(const char* name, size_t points, kf_link** out) {
    return guard([&] {
        need(name, "name");
        need(out, "out");
        *out = new kf_link{knots::by_name(name, points)};
    });
}

const char* kf_link_generate_names(void) {
    static const std::string names = [] {
        std::string s;
        for (const auto& n : knots::names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }();
    return names.c_str();
}

kf_status kf_link_from_points(size_t components, const size_t* counts, const double* xyz, kf_link** out) {
    return guard([&] {
        need(counts, "counts");
        need(xyz, "xyz");
        need(out, "out");
        std::vector<OrientedCurve> comps;
        std::size_t off = 0;
        for (size_t c = 0; c < components; ++c) {
            std::vector<Vec3> pts(counts[c]);
            for (auto& p : pts) {
                p = {xyz[off], xyz[off + 1], xyz[off + 2]};
                off += 3;
            }
            comps.push_back(OrientedCurve::from_points(std::move(pts)));
        }
        *out = new kf_link{Link(std::move(comps))};
    });
}

kf_status kf_link_resample(const kf_link* link, double ds, kf_link** out) {
    return guard([&] {
        need(link, "link");
        need(out, "out");
        *out = new kf_link{resample(link->link, ds)};
    });
}

void kf_link_free(kf_link* link) { delete link; }

size_t kf_link_components(const kf_link* link) { return link ? link->link.size() : 0; }

size_t kf_link_points(const kf_link* link, size_t component) {
    if (!link || component >= link->link.size()) return 0;
    return link->link[component].size();
}

kf_status kf_link_get_points(const kf_link* link, size_t component, double* xyz) {
    return guard([&] {
        const auto& c = component_of(link, component);
        need(xyz, "xyz");
        for (std::size_t i = 0; i < c.size(); ++i) {
            xyz[3 * i] = c.point(i).x;
            xyz[3 * i + 1] = c.point(i).y;
            xyz[3 * i + 2] = c.point(i).z;
        }
    });
}

kf_status kf_link_length(const kf_link* link, size_t component, double* out) {
    return guard([&] {
        need(out, "out");
        *out = component_of(link, component).total_length();
    });
}

kf_status kf_link_max_segment(const kf_link* link, double* out) {
    return guard([&] {
        need(link, "link");
        need(out, "out");
        *out = link->link.max_segment_length();
    });
}

kf_status kf_link_min_radius_of_curvature(const kf_link* link, size_t component, double* out) {
    return guard([&] {
        need(out, "out");
        *out = component_of(link, component).min_radius_of_curvature();
    });
}

kf_status kf_link_save(const kf_link* link, const char* path) {
    return guard([&] {
        need(link, "link");
        need(path, "path");
        save_link(link->link, path);
    });
}

kf_status kf_link_format(const kf_link* link, char** out) {
    return guard([&] {
        need(link, "link");
        need(out, "out");
        *out = dup_string(format_link(link->link));
    });
}

kf_status kf_link_hash(const kf_link* link, char out[65]) {
    return guard([&] {
        need(link, "link");
        need(out, "out");
        const std::string h = link_hash(link->link);
        std::memcpy(out, h.c_str(), 65);
    });
}

kf_status kf_writhe(const kf_link* link, size_t component, double* out) {
    return guard([&] {
        need(out, "out");
        *out = component_of(link, component).writhe();
    });
}

kf_status kf_linking_number(const kf_link* link, size_t a, size_t b, long* out, double* residual) {
    return guard([&] {
        need(out, "out");
        const auto& ca = component_of(link, a);
        const auto& cb = component_of(link, b);
        if (a == b) throw Error(ErrorKind::domain, "linking number needs two distinct components");
        const auto r = linking_integral(ca, cb);
        if (residual) *residual = r.residual;
        *out = linking_number(ca, cb);
    });
}

kf_status kf_projective_twist(const kf_link* link, size_t component, const double x[3], double* out) {
    return guard([&] {
        need(out, "out");
        *out = projective_twist(component_of(link, component), vec(x));
    });
}

kf_status kf_fuller_writhe_mod2(const kf_link* link, size_t component, const double n_inf[3], double* out) {
    return guard([&] {
        need(out, "out");
        *out = fuller_writhe_mod2(component_of(link, component), normalized(vec(n_inf)));
    });
}

kf_status kf_crossing_count(const kf_link* link, size_t component, const double x[3], int* out) {
    return guard([&] {
        need(out, "out");
        *out = crossing_count(project(component_of(link, component), vec(x)));
    });
}

kf_status kf_total_turning(const kf_link* link, size_t component, const double x[3], double* out) {
    return guard([&] {
        need(out, "out");
        *out = total_turning(project(component_of(link, component), vec(x)));
    });
}

kf_status kf_omega_point(const kf_link* link, const double x[3], const kf_eval_config* cfg, double* out) {
    return guard([&] {
        need(link, "link");
        need(out, "out");
        *out = omega_point(link->link, vec(x), to_cfg(cfg));
    });
}

kf_status kf_omega_points(const kf_link* link, const double* xyz, size_t n, const kf_eval_config* cfg,
                          unsigned workers, double* out) {
    return guard([&] {
        need(link, "link");
        need(xyz, "xyz");
        need(out, "out");
        const EvalConfig c = to_cfg(cfg);
        for (const auto& comp : link->link) (void)comp.writhe();
        parallel_for(n, workers, [&](std::size_t i) {
            const Vec3 x{xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]};
            if (distance_to_link(link->link, x) <= 1e-9) {
                out[i] = kSentinel;
                return;
            }
            try {
                out[i] = omega_point(link->link, x, c);
            } catch (const Error& e) {
                throw Error(e.kind(), "point " + std::to_string(i) + ": " + e.what());
            }
        });
    });
}

kf_status kf_homotopy_delta(const kf_link* k0, const kf_link* k1, const double x[3], double* out) {
    return guard([&] {
        need(out, "out");
        *out = homotopy_delta(component_of(k0, 0), component_of(k1, 0), vec(x));
    });
}

kf_status kf_omega_grid(const kf_link* link, const kf_grid* grid, const kf_eval_config* cfg, unsigned workers,
                        kf_scalar_field** out) {
    return guard([&] {
        need(link, "link");
        need(out, "out");
        *out = new kf_scalar_field{omega_grid(link->link, to_grid(grid), to_cfg(cfg), workers)};
    });
}

kf_status kf_distance_field(const kf_link* link, const kf_grid* grid, unsigned workers, kf_scalar_field** out) {
    return guard([&] {
        need(link, "link");
        need(out, "out");
        *out = new kf_scalar_field{distance_field(link->link, to_grid(grid), workers)};
    });
}

kf_status kf_scroll_field(const kf_link* link, const kf_grid* grid, double k, const kf_eval_config* cfg,
                          const char* modulation_path, unsigned workers, kf_scalar_field** out) {
    return guard([&] {
        need(link, "link");
        need(out, "out");
        if (!std::isfinite(k)) throw Error(ErrorKind::domain, "wavenumber must be finite");
        std::optional<Modulation> mod;
        if (modulation_path) mod = Modulation::load(modulation_path);
        *out = new kf_scalar_field{
            scroll_phase(link->link, to_grid(grid), k, to_cfg(cfg), mod ? &*mod : nullptr, workers)};
    });
}

void kf_scalar_field_free(kf_scalar_field* f) { delete f; }

size_t kf_scalar_field_size(const kf_scalar_field* f) { return f ? f->field.values.size() : 0; }

const double* kf_scalar_field_values(const kf_scalar_field* f) { return f ? f->field.values.data() : nullptr; }

size_t kf_scalar_field_sentinel_count(const kf_scalar_field* f) { return f ? f->field.sentinel_nodes.size() : 0; }

kf_status kf_scalar_field_meta_json(const kf_scalar_field* f, char** out) {
    return guard([&] {
        need(f, "field");
        need(out, "out");
        *out = dup_string(meta_json(f->field.meta, f->field.grid, f->field.sentinel_nodes).dump());
    });
}

kf_status kf_scalar_field_write(const kf_scalar_field* f, const char* base, const char* name) {
    return guard([&] {
        need(f, "field");
        need(base, "base");
        const std::string b = base;
        const std::string n = name ? name : f->field.meta.quantity;
        write_vtk_legacy(b + ".vti-legacy", f->field.grid, {{n, f->field.values}}, n);
        write_raw(b + ".raw", {f->field.values});
    });
}

kf_status kf_planar_director(const kf_scalar_field* omega, kf_vector_field** out) {
    return guard([&] {
        need(omega, "omega");
        need(out, "out");
        *out = new kf_vector_field{planar_director(omega->field)};
    });
}

kf_status kf_full_director(const kf_scalar_field* omega_k, const kf_scalar_field* omega_l, kf_vector_field** out) {
    return guard([&] {
        need(omega_k, "omega_k");
        need(omega_l, "omega_l");
        need(out, "out");
        *out = new kf_vector_field{full_director(omega_k->field, omega_l->field)};
    });
}

void kf_vector_field_free(kf_vector_field* f) { delete f; }

size_t kf_vector_field_size(const kf_vector_field* f) { return f ? f->field.values.size() : 0; }

kf_status kf_vector_field_values(const kf_vector_field* f, double* xyz) {
    return guard([&] {
        need(f, "field");
        need(xyz, "xyz");
        for (std::size_t i = 0; i < f->field.values.size(); ++i) {
            xyz[3 * i] = f->field.values[i].x;
            xyz[3 * i + 1] = f->field.values[i].y;
            xyz[3 * i + 2] = f->field.values[i].z;
        }
    });
}

kf_status kf_vector_field_meta_json(const kf_vector_field* f, char** out) {
    return guard([&] {
        need(f, "field");
        need(out, "out");
        *out = dup_string(meta_json(f->field.meta, f->field.grid, f->field.sentinel_nodes).dump());
    });
}

kf_status kf_vector_field_write(const kf_vector_field* f, const char* base) {
    return guard([&] {
        need(f, "field");
        need(base, "base");
        const std::string b = base;
        const auto dx = component(f->field, 0);
        const auto dy = component(f->field, 1);
        const auto dz = component(f->field, 2);
        write_vtk_legacy(b + ".vti-legacy", f->field.grid, {{"dx", dx}, {"dy", dy}, {"dz", dz}}, "director");
        write_raw(b + ".raw", {dx, dy, dz});
    });
}

kf_status kf_framing_compute(const kf_link* link, size_t component, double eps, const kf_eval_config* cfg,
                             unsigned workers, kf_framing** out) {
    return guard([&] {
        need(out, "out");
        const auto& c = component_of(link, component);
        if (eps <= 0.0) eps = default_framing_epsilon(c);
        *out = new kf_framing{solid_angle_framing(link->link, component, eps, to_cfg(cfg), workers)};
    });
}

void kf_framing_free(kf_framing* f) { delete f; }

size_t kf_framing_size(const kf_framing* f) { return f ? f->framing.alpha.size() : 0; }

double kf_framing_epsilon(const kf_framing* f) { return f ? f->framing.epsilon : 0.0; }

double kf_framing_alpha_winding(const kf_framing* f) { return f ? f->framing.alpha_winding : 0.0; }

kf_status kf_framing_table(const kf_framing* f, double* s, double* alpha, double* pushoff) {
    return guard([&] {
        need(f, "framing");
        const auto& fr = f->framing;
        for (std::size_t i = 0; i < fr.alpha.size(); ++i) {
            if (s) s[i] = fr.base.arclength()[i];
            if (alpha) alpha[i] = fr.alpha[i];
            if (pushoff) {
                pushoff[3 * i] = fr.pushoff[i].x;
                pushoff[3 * i + 1] = fr.pushoff[i].y;
                pushoff[3 * i + 2] = fr.pushoff[i].z;
            }
        }
    });
}

kf_status kf_framing_self_link(const kf_framing* f, long* out) {
    return guard([&] {
        need(f, "framing");
        need(out, "out");
        *out = framing_self_link(f->framing);
    });
}

kf_status kf_verify(const kf_link* link, size_t points, uint64_t seed, char** report, int* passed) {
    return guard([&] {
        need(link, "link");
        need(report, "report");
        const auto r = run_verify(link->link, {points, seed});
        if (passed) *passed = r.passed() ? 1 : 0;
        *report = dup_string(r.to_json());
    });
}

kf_status kf_verify_file(const char* path, size_t points, uint64_t seed, char** report, int* passed) {
    return guard([&] {
        need(path, "path");
        need(report, "report");
        const VerifyOptions opt{points, seed};
        VerifyReport r;
        try {
            r = run_verify(load_link(path), opt);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::parse && e.kind() != ErrorKind::validation && e.kind() != ErrorKind::io) throw;
            r = failed_load_report(e.what(), opt);
        }
        if (passed) *passed = r.passed() ? 1 : 0;
        *report = dup_string(r.to_json());
    });
}

}  // extern "C"
