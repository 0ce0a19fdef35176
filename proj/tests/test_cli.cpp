#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace ovib::cli;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::string line;
    std::getline(in, line);
    return line;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "ovib_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunConfig small_spectrum_config(const fs::path& out) {
    RunConfig cfg;
    cfg.eta = 2.0;
    cfg.x_max = 12.0;
    cfg.n_points = 1201;
    cfg.e_max = 12.0;
    cfg.out = out.string();
    return cfg;
}

} // namespace

TEST_CASE("spectrum command writes the pinned CSV surfaces") {
    const auto dir = fresh_dir("spectrum");
    const auto cfg = small_spectrum_config(dir);
    CHECK(cmd_spectrum(cfg) == 0);

    CHECK(first_line(dir / "eigenvalues.csv") ==
          "index,re_E_over_omega,im_E_over_omega,centroid,pr,localized,pair_id,pt_broken");
    CHECK(first_line(dir / "potential.csv") == "x,re_V,im_V");
    CHECK(first_line(dir / "eigenvectors.csv").rfind("x,psi2_0", 0) == 0);
    CHECK(fs::exists(dir / "run-metadata.json"));

    // eigenvector block has one row per grid point plus the header
    std::ifstream in(dir / "eigenvectors.csv");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == cfg.n_points + 1);
}

TEST_CASE("identical configs produce byte-identical outputs") {
    const auto dir_a = fresh_dir("det_a");
    const auto dir_b = fresh_dir("det_b");
    auto cfg_a = small_spectrum_config(dir_a);
    auto cfg_b = small_spectrum_config(dir_b);
    cfg_a.mode = cfg_b.mode = "full";
    CHECK(cmd_spectrum(cfg_a) == 0);
    CHECK(cmd_spectrum(cfg_b) == 0);
    for (const char* name : {"eigenvalues.csv", "eigenvectors.csv", "potential.csv"})
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
}

TEST_CASE("config echoed to run-metadata.json reproduces the run") {
    const auto dir_a = fresh_dir("echo_a");
    CHECK(cmd_spectrum(small_spectrum_config(dir_a)) == 0);

    auto echoed = RunConfig::load((dir_a / "run-metadata.json").string());
    const auto dir_b = fresh_dir("echo_b");
    echoed.out = dir_b.string();
    CHECK(cmd_spectrum(echoed) == 0);
    CHECK(slurp(dir_a / "eigenvalues.csv") == slurp(dir_b / "eigenvalues.csv"));
}

TEST_CASE("unknown config keys are rejected") {
    const auto dir = fresh_dir("badkey");
    const auto path = dir / "cfg.json";
    std::ofstream(path) << R"({"eta": 1.0, "couplings": 3})";
    CHECK_THROWS_AS(RunConfig::load(path.string()), ConfigError);
}

TEST_CASE("invalid configs are rejected before any output is written") {
    const auto dir = fresh_dir("reject");
    RunConfig cfg = small_spectrum_config(dir / "sub");
    cfg.branch = "x";
    CHECK_THROWS_AS(cmd_spectrum(cfg), ConfigError);

    cfg = small_spectrum_config(dir / "sub");
    cfg.n_points = 61; // cannot resolve the coupling oscillation
    CHECK_THROWS_AS(cmd_spectrum(cfg), ConfigError);

    cfg = small_spectrum_config(dir / "sub");
    cfg.e_max = 500.0; // wall cannot contain the window
    CHECK_THROWS_AS(cmd_spectrum(cfg), ConfigError);

    cfg = small_spectrum_config(dir / "sub");
    cfg.modes = {500}; // far beyond the energy window
    CHECK_THROWS_AS(cmd_spectrum(cfg), ConfigError);
    CHECK(!fs::exists(dir / "sub"));
}

TEST_CASE("selected eigenvector columns") {
    const auto dir = fresh_dir("modes");
    auto cfg = small_spectrum_config(dir);
    cfg.modes = {0, 2};
    CHECK(cmd_spectrum(cfg) == 0);
    CHECK(first_line(dir / "eigenvectors.csv") == "x,psi2_0,psi2_2");
}

TEST_CASE("thresholds command dumps the table") {
    const auto dir = fresh_dir("thresholds");
    RunConfig cfg;
    cfg.out = dir.string();
    CHECK(cmd_thresholds(cfg) == 0);
    CHECK(first_line(dir / "thresholds.csv") == "n,A_n,eta_n,E_n,approx_eta_n,approx_E_n");
    std::ifstream in(dir / "thresholds.csv");
    std::string header, row0, row1;
    std::getline(in, header);
    std::getline(in, row0);
    std::getline(in, row1);
    CHECK(row0.rfind("0,0,0.5,4,", 0) == 0);
    CHECK(row1.find("1.39550") != std::string::npos);
}

TEST_CASE("sweep command emits sweep, tracks, thresholds and failures files") {
    const auto dir = fresh_dir("sweep");
    RunConfig cfg;
    cfg.eta_start = 1.9;
    cfg.eta_stop = 2.1;
    cfg.eta_step = 0.1;
    cfg.e_max = 12.0;
    cfg.x_max = 12.0;
    cfg.n_points = 1201;
    cfg.out = dir.string();
    cfg.formats = {"csv", "svg"};
    CHECK(cmd_sweep(cfg) == 0);
    CHECK(first_line(dir / "sweep.csv") == "eta,mode_index,re_E,im_E,centroid,pr,localized,pair_id");
    CHECK(first_line(dir / "tracks.csv") == "pair_id,n,eta,re_E,ebar_n");
    CHECK(first_line(dir / "failures.csv") == "eta,stage,message");
    CHECK(fs::exists(dir / "thresholds.csv"));
    CHECK(fs::exists(dir / "sweep.svg"));
    CHECK(slurp(dir / "sweep.svg").rfind("<svg", 0) == 0);

    // three sweep points, each with the full mode block
    std::ifstream in(dir / "sweep.csv");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK((rows - 1) % 3 == 0);
}

TEST_CASE("phasemap command emits the lattice and ridge files") {
    const auto dir = fresh_dir("phasemap");
    RunConfig cfg;
    cfg.eta_start = 1.8;
    cfg.eta_stop = 2.2;
    cfg.e_min = 2.0;
    cfg.e_max = 12.0;
    cfg.n_eta = 24;
    cfg.n_energy = 40;
    cfg.out = dir.string();
    cfg.formats = {"csv", "svg"};
    CHECK(cmd_phasemap(cfg) == 0);
    CHECK(first_line(dir / "phasemap.csv") == "eta,E,frac_n,masked");
    CHECK(first_line(dir / "ridges.csv") == "eta,E,jump,component");
    CHECK(fs::exists(dir / "heatmap.svg"));
    std::ifstream in(dir / "phasemap.csv");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 24 * 40 + 1);
}

TEST_CASE("binary exit codes: config error 2, success 0") {
    const auto dir = fresh_dir("exitcodes");
    const std::string bin = OVIB_BIN;
    const std::string ok = bin + " thresholds --out " + (dir / "ok").string() + " > /dev/null";
    CHECK(std::system(ok.c_str()) == 0);
    const std::string bad =
        bin + " spectrum --branch x --out " + (dir / "bad").string() + " 2> /dev/null";
    const int rc = std::system(bad.c_str());
    CHECK(WEXITSTATUS(rc) == 2);
    const std::string coarse = bin + " spectrum --eta 6 --n-points 301 --out " +
                               (dir / "coarse").string() + " 2> /dev/null";
    CHECK(WEXITSTATUS(std::system(coarse.c_str())) == 2);
}
