#include "henon/errors.hpp"
#include "henon/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace henon;
using nlohmann::json;

namespace {

template <class T>
void check_round_trip(const T& value, const std::string& command) {
    const std::string text = wrap_artifact(command, json(value));
    const T back = unwrap_artifact(text, command).get<T>();
    CHECK(wrap_artifact(command, json(back)) == text);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("FNV-1a reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("artifacts round-trip through JSON") {
    const ProblemSpec spec = ProblemSpec::make(3, 1.0, parse_nonlinearity("pow:p=3"));
    const RadialProfile profile = shoot_ground_state(spec);
    check_round_trip(make_solve_artifact(profile, spec), "solve");

    MeshParams mp;
    mp.nodes = 600;
    check_round_trip(make_spectrum_artifact(spectrum(profile, spec, Weight::KM2, 3, mp), profile, spec), "spectrum");
    const SpectrumArtifact k = make_spectrum_artifact(spectrum(profile, spec, Weight::K, 3, mp), profile, spec);
    CHECK(k.degeneracy.has_value());
    CHECK_FALSE(k.eigenvector_error.has_value());
    check_round_trip(k, "spectrum");

    MorseTable t;
    t.rows = {morse_report(1.0, 3), morse_report(2.0, 3, 0, Side::Left), morse_report(2.0, 3, 0, Side::Right)};
    check_round_trip(t, "morse-table");
    check_round_trip(branch_census(6, 4), "census");

    BesselTable b;
    b.rows = {bessel_ik(0.5, 1.0), bessel_ik(2.0, 50.0)};
    check_round_trip(b, "bessel");

    const DecayReport d = verify_superexp_decay(TailSource::Square, 2.0, 1.0, 3, {1.0, 2.0, 3.0, 4.0});
    check_round_trip(d, "verify-decay");

    SweepArtifact s;
    s.sweep = sweep(3, parse_nonlinearity("pow:p=3"), 1.0, 2.5, 3);
    s.identities = verify_identity_suite(s.sweep);
    check_round_trip(s, "sweep");

    CheckFArtifact c;
    c.F = "pow:p=3";
    c.report = check_assumptions(parse_nonlinearity("pow:p=3"), log_grid(1e-3, 1e3, 201));
    check_round_trip(c, "check-F");
}

TEST_CASE("non-finite numbers survive the round trip") {
    SweepResult r;
    SweepSample s;
    s.ok = false;
    s.a_star = std::nan("");
    s.lambda1_error = INFINITY;
    s.delta_fit = -INFINITY;
    r.samples.push_back(s);
    const SweepResult back = json::parse(json(r).dump()).get<SweepResult>();
    CHECK(std::isnan(back.samples[0].a_star));
    CHECK(back.samples[0].lambda1_error == INFINITY);
    CHECK(back.samples[0].delta_fit == -INFINITY);
}

TEST_CASE("envelope checks") {
    const std::string text = wrap_artifact("census", json(branch_census(2, 3)));
    CHECK(json::parse(text).at("schema") == kSchemaVersion);
    CHECK(text.back() == '\n');
    CHECK_THROWS_AS(unwrap_artifact(text, "solve"), DomainError);
    CHECK_THROWS_AS(unwrap_artifact("{\"schema\": 99, \"command\": \"census\", \"result\": {}}", "census"), DomainError);
    CHECK_THROWS_AS(unwrap_artifact("not json", "census"), DomainError);
}

TEST_CASE("CSV layout") {
    MorseTable t;
    t.rows = {morse_report(0.5, 3), morse_report(2.0, 3, 0, Side::Left), morse_report(2.0, 3, 0, Side::Right)};
    const std::string csv = to_csv(t);
    CHECK(csv == "alpha,side,m,m_symmetric,kernel_dim,bifurcation\n"
                 "0.5,,4,2,0,0\n"
                 "2,left,4,2,5,1\n"
                 "2,right,9,3,5,1\n");
    CHECK(csv.find('\r') == std::string::npos);

    BesselTable b;
    b.rows = {bessel_ik(0.5, 0.1)};
    const std::string bc = to_csv(b);
    CHECK(bc.rfind("nu,s,I,K,dI,dK,regime\n", 0) == 0);
    CHECK(bc.find("0.5,0.1,") != std::string::npos);
}

TEST_CASE("atomic writes") {
    const auto dir = std::filesystem::temp_directory_path() / "henon_io_test";
    std::filesystem::remove_all(dir);
    const auto file = dir / "sub" / "out.json";
    write_atomic(file, "first\n");
    CHECK(slurp(file) == "first\n");
    write_atomic(file, "second\n");
    CHECK(slurp(file) == "second\n");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(file.parent_path())) ++entries;
    CHECK(entries == 1);
    std::filesystem::remove_all(dir);
}
