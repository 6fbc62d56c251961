// End-to-end smoke test of the command-line tool. argv[1] is the path to the
// built binary. Prints one line per scenario; exit code = number of failures.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "polyfact/datagen.hpp"
#include "polyfact/ellipsoid.hpp"
#include "polyfact/matrix_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g_cli;
fs::path g_dir;
int g_failures = 0;

// run a CLI invocation, capture stdout, return the exit code
int run(const std::string& args, std::string* output = nullptr) {
    fs::path cap = g_dir / "stdout.txt";
    std::string cmd = "\"" + g_cli + "\" " + args + " > \"" + cap.string() + "\" 2>/dev/null";
    int status = std::system(cmd.c_str());
    if (output) {
        std::ifstream in(cap);
        std::stringstream ss;
        ss << in.rdbuf();
        *output = ss.str();
    }
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect(bool ok, const std::string& what) {
    if (ok) {
        std::printf("ok   %s\n", what.c_str());
    } else {
        ++g_failures;
        std::printf("FAIL %s\n", what.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_smoke <path-to-cli>\n");
        return 1;
    }
    g_cli = argv[1];
    g_dir = fs::temp_directory_path() / "polyfact_cli_smoke";
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);
    const std::string dir = g_dir.string();

    // generate a ground-truth directory
    int rc = run("generate --polytope binf --dim 3 --M 4 --N 50 --rho 1.5 --seed 5 --out \"" +
                 dir + "/gt\"");
    expect(rc == 0, "generate exits 0");
    for (const char* f : {"Hg.csv", "Sg.csv", "Y.csv", "meta.json"})
        expect(fs::exists(g_dir / "gt" / f), std::string("generate wrote ") + f);

    // factorize the generated data
    rc = run("factorize --input \"" + dir + "/gt/Y.csv\" --polytope binf --rank 3 --seed 1 "
             "--out \"" + dir + "/fact\"");
    expect(rc == 0 || rc == 2, "factorize exits 0 or 2");
    for (const char* f : {"H.csv", "S.csv", "trace.csv", "summary.json"})
        expect(fs::exists(g_dir / "fact" / f), std::string("factorize wrote ") + f);
    {
        std::ifstream in(g_dir / "fact" / "summary.json");
        json s;
        in >> s;
        expect(s.at("converged").get<bool>() == (rc == 0), "summary matches the exit code");
        polyfact::Matrix S = polyfact::read_matrix_csv(dir + "/fact/S.csv");
        expect(S.rows() == 3 && S.cols() == 50, "recovered S has the right shape");
    }

    // staged factorization
    rc = run("factorize --input \"" + dir + "/gt/Y.csv\" --polytope binf --rank 3 --seed 1 "
             "--staged --lambda 0.2 --step-scale 1 --out \"" + dir + "/fact2\"");
    expect(rc == 0 || rc == 2, "staged factorize exits 0 or 2");
    {
        std::ifstream in(g_dir / "fact2" / "summary.json");
        json s;
        in >> s;
        expect(s.at("staged").get<bool>(), "summary records the staged flag");
    }

    // mvie on a named polytope matches the closed form
    {
        std::string out;
        rc = run("mvie --polytope b1plus --dim 3", &out);
        expect(rc == 0, "mvie exits 0");
        json j = json::parse(out);
        polyfact::Ellipsoid want = polyfact::mvie_closed_form(polyfact::SpecialKind::B1Plus, 3);
        double cerr = 0, gerr = 0;
        for (int i = 0; i < 3; ++i) {
            gerr = std::max(gerr, std::abs(j["g"][i].get<double>() - want.g(i)));
            for (int k = 0; k < 3; ++k)
                cerr = std::max(cerr, std::abs(j["C"][i][k].get<double>() - want.C(i, k)));
        }
        expect(cerr <= 1e-5 && gerr <= 1e-5, "mvie output matches the closed form");
        expect(j.at("is_plausible_mvie").get<bool>(), "mvie certificate holds");
    }

    // identifiability: composite passes, hexagon fails with a witness
    rc = run("check-identifiable --polytope composite");
    expect(rc == 0, "check-identifiable accepts the composite polytope");
    {
        json hex;
        hex["dim"] = 2;
        hex["kind"] = "vform";
        json V = json::array({json::array(), json::array()});
        for (int k = 0; k < 6; ++k) {
            V[0].push_back(std::cos(k * M_PI / 3.0));
            V[1].push_back(std::sin(k * M_PI / 3.0));
        }
        hex["V"] = V;
        std::ofstream(g_dir / "hexagon.json") << hex.dump();
        std::string out;
        rc = run("check-identifiable --polytope \"" + dir + "/hexagon.json\"", &out);
        expect(rc == 3, "check-identifiable rejects the hexagon with exit 3");
        expect(json::parse(out).contains("witness"), "hexagon report carries a witness");
    }

    // scattering: constructive samples pass, interior samples fail
    {
        auto pex = polyfact::make_composite_example();
        polyfact::write_matrix_csv(dir + "/scattered.csv",
                                   polyfact::generate_polar_domain(pex, 30, 3));
        rc = run("check-scattered --polytope composite --samples \"" + dir + "/scattered.csv\"");
        expect(rc == 0, "check-scattered accepts a constructive sample");

        polyfact::write_matrix_csv(
            dir + "/interior.csv",
            polyfact::generate_inflated_mvie(pex, polyfact::InflationParams{0.5, 30}, 4));
        rc = run("check-scattered --polytope composite --samples \"" + dir + "/interior.csv\"");
        expect(rc == 3, "check-scattered rejects an interior sample with exit 3");
    }

    // experiment sweep from a config file
    {
        json cfg = {
            {"polytope", "binf"}, {"dim", 2},           {"M", 3},
            {"N", {20}},          {"snr_db", {"inf"}},  {"realizations", 2},
            {"generator", "inflated_mvie"},             {"rho", {1.5}},
            {"max_iters", 2000},  {"base_seed", 11},
        };
        std::ofstream(g_dir / "config.json") << cfg.dump();
        rc = run("experiment --config \"" + dir + "/config.json\" --out \"" + dir + "/exp\"");
        expect(rc == 0, "experiment exits 0");
        expect(fs::exists(g_dir / "exp" / "results.csv"), "experiment wrote results.csv");
        expect(fs::exists(g_dir / "exp" / "aggregate.csv"), "experiment wrote aggregate.csv");
    }

    // error paths
    rc = run("factorize --input \"" + dir + "/nope.csv\" --polytope binf --rank 3");
    expect(rc == 1, "missing input file exits 1");
    rc = run("mvie --polytope \"" + dir + "/nope.json\"");
    expect(rc == 1, "missing polytope file exits 1");

    if (g_failures == 0) std::printf("cli smoke test passed\n");
    else std::printf("%d cli smoke checks failed\n", g_failures);
    return g_failures;
}
