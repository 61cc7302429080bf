// Exercises the installed command-line surface through a subprocess; the
// binary path arrives in QSC_BIN (set by ctest).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string bin() {
    const char* b = std::getenv("QSC_BIN");
    REQUIRE_MESSAGE(b != nullptr, "QSC_BIN must point at the CLI binary");
    return b;
}

fs::path scratch() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "qsc_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args, const fs::path& stderr_to = {}) {
    std::string cmd = bin() + " " + args + " >/dev/null";
    cmd += stderr_to.empty() ? " 2>/dev/null" : " 2>" + stderr_to.string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kFreeNoether = R"({
  "grid": {"t0": 0.0, "h": 0.00390625, "n_core": 257, "n_pad": 64},
  "eps": {"k": 4},
  "lagrangian": {"kind": "free", "m": 1.0},
  "trajectory": {"kind": "polynomial", "coeffs": [0.0, 3.0]},
  "generator": {"tau": "0", "xi": "1"},
  "tolerances": {"drift": 1e-12},
  "output": {"path": "%OUT%", "format": "json"}
})";

std::string with_out(std::string text, const fs::path& out) {
    const auto pos = text.find("%OUT%");
    return text.replace(pos, 5, out.string());
}

}  // namespace

TEST_CASE("noether run passes, embeds the config and honors the tolerance") {
    const fs::path cfg = scratch() / "noe.json", rep = scratch() / "noe_report.json";
    write(cfg, with_out(kFreeNoether, rep));
    CHECK(run("noether --config " + cfg.string()) == 0);
    const json report = json::parse(slurp(rep));
    CHECK(report["pass"] == true);
    CHECK(report["command"] == "noether");
    CHECK(report["result"]["max_drift"].get<double>() <= 1e-12);
    CHECK(report["result"]["reference"][0].get<double>() == doctest::Approx(3.0));
    CHECK(report["config"]["eps"]["k"] == 4);
}

TEST_CASE("leibniz run reports both correction conventions") {
    const fs::path cfg = scratch() / "leib.json", rep = scratch() / "leib_report.json";
    write(cfg, R"({
      "grid": {"t0": 0.0, "h": 0.001953125, "n_core": 513, "n_pad": 16},
      "eps": {"k": 8},
      "function": {"kind": "polynomial", "coeffs": [0.0, 1.0]},
      "g_function": {"kind": "polynomial", "coeffs": [0.0, 1.0]},
      "output": {"path": ")" + rep.string() + R"("}
    })");
    CHECK(run("leibniz --config " + cfg.string()) == 0);
    const json report = json::parse(slurp(rep));
    const double eps = 8 * 0.001953125;
    CHECK(report["result"]["derived_exact"]["residual_max"].get<double>() <= 1e-13);
    CHECK(report["result"]["paper_printed"]["residual_max"].get<double>() ==
          doctest::Approx(eps).epsilon(1e-9));
}

TEST_CASE("schema violations exit 1 and name the offending field") {
    const fs::path cfg = scratch() / "bad.json", err = scratch() / "bad.err";
    write(cfg, R"({"grid": {"t0": 0.0, "h": 0.1, "n_core": 64, "n_pad": 8}, "eps": {"k": 2},
                  "lagrangian": {"kind": "free"},
                  "trajectory": {"kind": "polynomial", "coeffs": [0, 1]}})");
    CHECK(run("noether --config " + cfg.string(), err) == 1);
    CHECK(slurp(err).find("generator") != std::string::npos);

    write(cfg, R"({"grid": {"t0": 0.0, "h": -0.1, "n_core": 64}})");
    CHECK(run("derive --config " + cfg.string(), err) == 1);
    CHECK(slurp(err).find("h") != std::string::npos);

    CHECK(run("noether --config " + (scratch() / "missing.json").string(), err) == 1);
}

TEST_CASE("an empty ladder in an order-fit command exits 1") {
    const fs::path cfg = scratch() / "ladder.json", err = scratch() / "ladder.err";
    write(cfg, R"({
      "grid": {"t0": 0.0, "h": 0.001, "n_core": 1001, "n_pad": 32},
      "eps_ladder": {"k_min": 8, "k_max": 4},
      "function": {"kind": "weierstrass", "a": 0.5, "b": 3, "n_terms": 3}
    })");
    CHECK(run("holder --config " + cfg.string(), err) == 1);
    CHECK(slurp(err).find("eps_ladder") != std::string::npos);
}

TEST_CASE("failing checks exit 2") {
    const fs::path cfg = scratch() / "fail.json", rep = scratch() / "fail_report.json";
    write(cfg, R"({
      "grid": {"t0": 0.0, "h": 0.00390625, "n_core": 257, "n_pad": 16},
      "eps": {"k": 4},
      "lagrangian": {"kind": "free", "m": 1.0},
      "trajectory": {"kind": "polynomial", "coeffs": [0.0, 1.0]},
      "generator": {"tau": "0", "xi": "t"},
      "subintervals": [[0.0, 0.5]],
      "output": {"path": ")" + rep.string() + R"("}
    })");
    CHECK(run("invariance --config " + cfg.string()) == 2);
    CHECK(json::parse(slurp(rep))["pass"] == false);
}

TEST_CASE("identical configs produce byte-identical reports") {
    const fs::path cfg = scratch() / "det.json";
    const fs::path rep1 = scratch() / "det1.json", rep2 = scratch() / "det2.json";
    write(cfg, R"({
      "grid": {"t0": 0.0, "h": 0.0009765625, "n_core": 1025, "n_pad": 64},
      "eps": {"k": 2},
      "eps_ladder": {"k_min": 2, "k_max": 16},
      "lagrangian": {"kind": "quadratic", "m": 1.0,
                     "potential": {"kind": "polynomial", "coeffs": [0.0, 0.0, 0.5]}},
      "trajectory": {"kind": "exponential", "amp_plus": 0.5, "amp_minus": 0.5, "rate": 1.0},
      "generator": {"tau": "1", "xi": "0"}
    })");
    CHECK(run("noether --config " + cfg.string() + " --out " + rep1.string()) == 0);
    CHECK(run("noether --config " + cfg.string() + " --out " + rep2.string()) == 0);
    const std::string a = slurp(rep1), b = slurp(rep2);
    REQUIRE_FALSE(a.empty());
    // reports differ only in the output path override, which --out keeps out
    // of the embedded config
    CHECK(a == b);
}

TEST_CASE("csv output carries the series with the mandatory header") {
    const fs::path cfg = scratch() / "csv.json", rep = scratch() / "derive.csv";
    write(cfg, R"({
      "grid": {"t0": 0.0, "h": 0.0625, "n_core": 17, "n_pad": 4},
      "eps": {"k": 2},
      "function": {"kind": "trig", "amp": 1.0, "freq": 2.0, "phase": 0.0},
      "output": {"path": ")" + rep.string() + R"(", "format": "csv"}
    })");
    CHECK(run("derive --config " + cfg.string()) == 0);
    const std::string text = slurp(rep);
    CHECK(text.rfind("index,t,f_re,f_im,dplus_re", 0) == 0);
}

TEST_CASE("schrodinger subcommand routes variants") {
    const fs::path cfg = scratch() / "sch.json", rep = scratch() / "sch_report.json";
    write(cfg, R"({
      "schrodinger": {
        "psi": {"kind": "plane_wave", "k": 2.0, "E": 2.0},
        "params": {"m": 1.0, "hbar": 1.0},
        "probe": {"t0": 0.0, "dt": 0.1, "nt": 5, "q0": -1.0, "dq": 0.25, "nq": 9}
      },
      "tolerances": {"residual": 1e-12},
      "output": {"path": ")" + rep.string() + R"("}
    })");
    CHECK(run("schrodinger linear residual --config " + cfg.string()) == 0);
    CHECK(json::parse(slurp(rep))["result"]["sup_residual"].get<double>() <= 1e-12);
    CHECK(run("schrodinger bogus residual --config " + cfg.string()) == 1);
}
