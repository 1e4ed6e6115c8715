// Exercises the shared library through its C header only.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "knotfield/knotfield.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct LinkHandle {
    kf_link* p = nullptr;
    ~LinkHandle() { kf_link_free(p); }
};

struct FieldHandle {
    kf_scalar_field* p = nullptr;
    ~FieldHandle() { kf_scalar_field_free(p); }
};

std::string take(char* s) {
    std::string out = s;
    kf_string_free(s);
    return out;
}

kf_grid grid(size_t nx, size_t ny, size_t nz, double h, double ox, double oy, double oz) {
    kf_grid g;
    g.dims[0] = nx;
    g.dims[1] = ny;
    g.dims[2] = nz;
    g.spacing = h;
    g.origin[0] = ox;
    g.origin[1] = oy;
    g.origin[2] = oz;
    return g;
}

}  // namespace

TEST_CASE("capi: names and version") {
    CHECK(std::string(kf_version()) == "0.1.0");
    CHECK(std::string(kf_status_name(KF_ERR_PARSE)) == "parse error");
    kf_evaluator e;
    REQUIRE(kf_evaluator_from_name("gauss_bonnet", &e) == KF_OK);
    CHECK(e == KF_EVAL_GAUSS_BONNET);
    CHECK(std::string(kf_evaluator_name(KF_EVAL_TANGENT_DEV_MINUS)) == "tangent_dev_minus");
    CHECK(kf_evaluator_from_name("bogus", &e) == KF_ERR_DOMAIN);
    CHECK(std::string(kf_last_error()).find("bogus") != std::string::npos);
    kf_eval_config cfg;
    kf_eval_config_default(&cfg);
    CHECK(cfg.n_inf[2] == 1.0);
    CHECK(cfg.switch_threshold == 0.05);
}

TEST_CASE("capi: null arguments and bad input") {
    kf_link* link = nullptr;
    CHECK(kf_link_parse(nullptr, &link) == KF_ERR_NULL);
    CHECK(kf_link_parse("components: 1\n", nullptr) == KF_ERR_NULL);
    CHECK(kf_link_parse("components: 1\npoints: 3\n0 0 0\n1 0 x\n0 1 0\n", &link) == KF_ERR_PARSE);
    CHECK(std::string(kf_last_error()).find("line 4") != std::string::npos);
    CHECK(link == nullptr);
    CHECK(kf_link_load("/nonexistent.curve", &link) == KF_ERR_IO);

    const size_t counts[1] = {2};
    const double xyz[6] = {0, 0, 0, 1, 0, 0};
    CHECK(kf_link_from_points(1, counts, xyz, &link) == KF_ERR_VALIDATION);
    CHECK(kf_link_generate("nonesuch", 100, &link) == KF_ERR_DOMAIN);
}

TEST_CASE("capi: link queries and invariants") {
    LinkHandle t;
    REQUIRE(kf_link_generate("trefoil", 300, &t.p) == KF_OK);
    CHECK(kf_link_components(t.p) == 1);
    CHECK(kf_link_points(t.p, 0) == 300);
    std::vector<double> pts(900);
    CHECK(kf_link_get_points(t.p, 0, pts.data()) == KF_OK);
    CHECK(std::abs(pts[1] - 3.0 * 0 + 1.0) < 1e-12);  // (sin 0 + 2 sin 0, cos 0 - 2 cos 0, .) = (0, -1, 0)
    double len = 0.0, rho = 0.0, wr = 0.0, tw = 0.0, ful = 0.0, turning = 0.0;
    CHECK(kf_link_length(t.p, 0, &len) == KF_OK);
    CHECK(len > 0.0);
    CHECK(kf_link_min_radius_of_curvature(t.p, 0, &rho) == KF_OK);
    CHECK(rho > 0.0);
    char hash[65];
    CHECK(kf_link_hash(t.p, hash) == KF_OK);
    CHECK(std::string(hash).size() == 64);

    CHECK(kf_writhe(t.p, 0, &wr) == KF_OK);
    const double x[3] = {0.3, 0.2, 3.0};
    CHECK(kf_projective_twist(t.p, 0, x, &tw) == KF_OK);
    CHECK(std::abs(tw + wr - std::round(tw + wr)) < 2e-2);
    const double n[3] = {0, 0, 1};
    CHECK(kf_fuller_writhe_mod2(t.p, 0, n, &ful) == KF_OK);
    CHECK(std::abs(std::remainder(ful - 2.0 * kPi * (1.0 + wr), 4.0 * kPi)) < 5e-3);
    int d = -1;
    const double far[3] = {0.31 * 40, -0.17 * 40, 40.0};
    CHECK(kf_crossing_count(t.p, 0, far, &d) == KF_OK);
    CHECK(d == 3);
    CHECK(kf_total_turning(t.p, 0, x, &turning) == KF_OK);
    CHECK(kf_writhe(t.p, 4, &wr) == KF_ERR_DOMAIN);

    LinkHandle h;
    REQUIRE(kf_link_generate("hopf", 200, &h.p) == KF_OK);
    long lk = 0;
    double residual = 1.0;
    CHECK(kf_linking_number(h.p, 0, 1, &lk, &residual) == KF_OK);
    CHECK(lk == 1);
    CHECK(residual < 1e-6);

    LinkHandle r;
    CHECK(kf_link_resample(t.p, len / 150.0, &r.p) == KF_OK);
    CHECK(kf_link_points(r.p, 0) == 150);

    char* text = nullptr;
    CHECK(kf_link_format(t.p, &text) == KF_OK);
    LinkHandle again;
    CHECK(kf_link_parse(text, &again.p) == KF_OK);
    kf_string_free(text);
    char hash2[65];
    kf_link_hash(again.p, hash2);
    CHECK(std::string(hash) == hash2);
}

TEST_CASE("capi: point evaluation, sentinels and homotopy") {
    LinkHandle c;
    REQUIRE(kf_link_generate("circle", 256, &c.p) == KF_OK);
    kf_eval_config cfg;
    kf_eval_config_default(&cfg);
    const double centre[3] = {0, 0, 0};
    double w = 0.0;
    CHECK(kf_omega_point(c.p, centre, &cfg, &w) == KF_OK);
    CHECK(std::abs(w - 2.0 * kPi) < 1e-9);

    const double xyz[9] = {0, 0, 0.5, 1, 0, 0, 0, 0, -2};
    double out[3];
    CHECK(kf_omega_points(c.p, xyz, 3, &cfg, 2, out) == KF_OK);
    CHECK(out[1] == -1.0);
    CHECK(out[0] > 0.0);

    double delta = 1.0;
    CHECK(kf_homotopy_delta(c.p, c.p, xyz, &delta) == KF_OK);
    CHECK(delta == 0.0);

    cfg.n_inf[2] = 2.0;
    CHECK(kf_omega_point(c.p, centre, &cfg, &w) == KF_ERR_DOMAIN);
}

TEST_CASE("capi: grid fields, metadata and files") {
    LinkHandle t;
    REQUIRE(kf_link_generate("trefoil", 200, &t.p) == KF_OK);
    kf_eval_config cfg;
    kf_eval_config_default(&cfg);
    const kf_grid g = grid(6, 5, 4, 0.9, -2.5, -2.0, -1.5);

    FieldHandle w, s, d;
    REQUIRE(kf_omega_grid(t.p, &g, &cfg, 2, &w.p) == KF_OK);
    CHECK(kf_scalar_field_size(w.p) == 120);
    CHECK(kf_scalar_field_sentinel_count(w.p) == 0);
    const auto meta = nlohmann::json::parse(take([&] {
        char* m = nullptr;
        kf_scalar_field_meta_json(w.p, &m);
        return m;
    }()));
    CHECK(meta["quantity"] == "omega");
    CHECK(meta["grid"]["dims"][0] == 6);
    CHECK(meta["sentinel_nodes"].size() == 0);
    CHECK(meta["curve_hash"].get<std::string>().size() == 64);

    // k = 0 scroll phase is omega / 2 node by node.
    REQUIRE(kf_scroll_field(t.p, &g, 0.0, &cfg, nullptr, 1, &s.p) == KF_OK);
    const double* wv = kf_scalar_field_values(w.p);
    const double* sv = kf_scalar_field_values(s.p);
    for (size_t i = 0; i < 120; ++i) CHECK(std::abs(std::remainder(sv[i] - 0.5 * wv[i], 2.0 * kPi)) < 1e-12);

    REQUIRE(kf_distance_field(t.p, &g, 0, &d.p) == KF_OK);
    CHECK(kf_scalar_field_values(d.p)[0] > 0.0);

    kf_vector_field* v = nullptr;
    REQUIRE(kf_planar_director(w.p, &v) == KF_OK);
    std::vector<double> dv(3 * kf_vector_field_size(v));
    CHECK(kf_vector_field_values(v, dv.data()) == KF_OK);
    for (size_t i = 0; i < dv.size(); i += 3) {
        CHECK(std::abs(std::sqrt(dv[i] * dv[i] + dv[i + 1] * dv[i + 1] + dv[i + 2] * dv[i + 2]) - 1.0) < 1e-12);
    }
    kf_vector_field* v2 = nullptr;
    CHECK(kf_full_director(w.p, d.p, &v2) == KF_OK);
    kf_vector_field_free(v2);

    const auto dir = std::filesystem::temp_directory_path() / "knotfield_capi";
    std::filesystem::create_directories(dir);
    const std::string base = (dir / "omega").string();
    CHECK(kf_scalar_field_write(w.p, base.c_str(), "omega") == KF_OK);
    CHECK(std::filesystem::file_size(base + ".raw") == 120 * 8);
    CHECK(std::filesystem::exists(base + ".vti-legacy"));
    const std::string vbase = (dir / "director").string();
    CHECK(kf_vector_field_write(v, vbase.c_str()) == KF_OK);
    CHECK(std::filesystem::file_size(vbase + ".raw") == 3 * 120 * 8);
    kf_vector_field_free(v);

    kf_grid bad = g;
    bad.dims[1] = 1;
    kf_scalar_field* none = nullptr;
    CHECK(kf_omega_grid(t.p, &bad, &cfg, 1, &none) == KF_ERR_DOMAIN);
}

TEST_CASE("capi: framing of a Hopf component") {
    LinkHandle h;
    REQUIRE(kf_link_generate("hopf", 200, &h.p) == KF_OK);
    kf_eval_config cfg;
    kf_eval_config_default(&cfg);
    kf_framing* f = nullptr;
    REQUIRE(kf_framing_compute(h.p, 0, 0.0, &cfg, 0, &f) == KF_OK);
    long sl = 0;
    CHECK(kf_framing_self_link(f, &sl) == KF_OK);
    CHECK(sl == -1);
    const size_t n = kf_framing_size(f);
    CHECK(n == 200);
    std::vector<double> s(n), alpha(n);
    CHECK(kf_framing_table(f, s.data(), alpha.data(), nullptr) == KF_OK);
    CHECK(s[0] == 0.0);
    CHECK(kf_framing_epsilon(f) > 0.0);
    kf_framing_free(f);
    CHECK(kf_framing_compute(h.p, 0, 10.0, &cfg, 0, &f) == KF_ERR_DOMAIN);
}

TEST_CASE("capi: verification report") {
    LinkHandle t;
    REQUIRE(kf_link_generate("trefoil", 256, &t.p) == KF_OK);
    char* report = nullptr;
    int passed = 0;
    REQUIRE(kf_verify(t.p, 48, 3, &report, &passed) == KF_OK);
    CHECK(passed == 1);
    const auto j = nlohmann::json::parse(take(report));
    CHECK(j["passed"] == true);

    REQUIRE(kf_verify_file("/nonexistent.curve", 48, 3, &report, &passed) == KF_OK);
    CHECK(passed == 0);
    kf_string_free(report);
}
