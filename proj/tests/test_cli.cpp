// Command-line front end: exit codes, documents, CSV/JSON equivalence.

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "output.hpp"

using namespace ptexp::cli;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ptexp");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

Json json_of(const Run& r) { return Json::parse(r.out); }

std::vector<std::string> with(std::vector<std::string> args, const std::string& format) {
    args.insert(args.begin(), {"--format", format});
    return args;
}

// Each CSV table equals the JSON array of records with the same name, to the bit.
void check_round_trip(const std::vector<std::string>& args) {
    INFO("command: " << args.front());
    const Run j = run_cli(with(args, "json")), c = run_cli(with(args, "csv"));
    REQUIRE(j.code == 0);
    REQUIRE(c.code == 0);
    const Json doc = json_of(j);
    const auto tables = read_csv_tables(c.out);
    REQUIRE_FALSE(tables.empty());
    for (const Table& t : tables) {
        INFO("table: " << t.name);
        REQUIRE(doc["data"].contains(t.name));
        const Json& rows = doc["data"][t.name];
        REQUIRE(rows.size() == t.rows.size());
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            for (std::size_t k = 0; k < t.columns.size(); ++k) {
                const Json& v = rows[i][t.columns[k]];
                const Cell& cell = t.rows[i][k];
                if (v.is_null()) {
                    CHECK(std::holds_alternative<std::nullptr_t>(cell));
                } else if (v.is_number()) {
                    REQUIRE(std::holds_alternative<double>(cell));
                    CHECK(std::get<double>(cell) == v.get<double>());
                } else {
                    REQUIRE(std::holds_alternative<std::string>(cell));
                    CHECK(std::get<std::string>(cell) == v.get<std::string>());
                }
            }
    }
    // Meta entries appear verbatim as comment lines.
    std::istringstream is(c.out);
    std::string line;
    std::getline(is, line);
    REQUIRE(line.rfind("# manifest: ", 0) == 0);
    Json m = Json::parse(line.substr(12));
    Json mj = doc["manifest"];
    m.erase("timestamp");
    mj.erase("timestamp");
    m["options"].erase("format");
    mj["options"].erase("format");
    CHECK(m == mj);
    while (std::getline(is, line) && line.rfind("# table: ", 0) != 0) {
        const auto colon = line.find(": ");
        const std::string key = line.substr(2, colon - 2);
        CHECK(Json::parse(line.substr(colon + 2)) == doc["data"][key]);
    }
}

}  // namespace

TEST_CASE("spectrum: five rows at a = g = 1, one at a = 5") {
    const Run r = run_cli({"spectrum", "--a", "1", "--g", "1", "--emax", "30"});
    REQUIRE(r.code == 0);
    const Json d = json_of(r);
    CHECK(d["manifest"]["command"] == "spectrum");
    CHECK(d["manifest"]["params"]["a"] == 1.0);
    CHECK(d["manifest"]["tool_version"] == kToolVersion);
    CHECK(d["manifest"]["timestamp"].get<std::string>().size() == 20);
    const Json& ev = d["data"]["eigenvalues"];
    REQUIRE(ev.size() == 5);
    const double quoted[] = {3.27651, 8.83705, 13.7572, 21.3361, 25.6883};
    for (int i = 0; i < 5; ++i) {
        CHECK(ev[i]["index"] == i);
        CHECK(ev[i]["kind"] == "real");
        CHECK(std::abs(ev[i]["re_E"].get<double>() - quoted[i]) < 5e-4);
        CHECK(ev[i]["newton_iters"].get<int>() >= 0);
    }
    const Run r5 = run_cli({"spectrum", "--a", "5", "--g", "1", "--emax", "30"});
    REQUIRE(r5.code == 0);
    CHECK(json_of(r5)["data"]["eigenvalues"].size() == 1);
}

TEST_CASE("spectrum: complex seeds add the conjugate pair after the reals") {
    const Run r = run_cli({"spectrum", "--a", "1", "--g", "1", "--emax", "30", "--complex-seeds", "37.58+2.69i",
                           "--complex-seeds", "37.58,-2.69"});
    REQUIRE(r.code == 0);
    const Json ev = json_of(r)["data"]["eigenvalues"];
    REQUIRE(ev.size() == 7);
    CHECK(ev[5]["im_E"].get<double>() < 0.0);
    CHECK(ev[6]["im_E"].get<double>() > 0.0);
    CHECK(ev[5]["re_E"] == ev[6]["re_E"]);
    CHECK(std::abs(ev[6]["re_E"].get<double>() - 37.5832) < 5e-4);
    CHECK(run_cli({"spectrum", "--a", "1", "--g", "1", "--emax", "30", "--complex-seeds", "37.58"}).code == 2);
}

TEST_CASE("exit codes") {
    const Run g0 = run_cli({"spectrum", "--a", "1", "--g", "0", "--emax", "10"});
    CHECK(g0.code == 2);
    CHECK(g0.err.find("g must be nonzero") != std::string::npos);
    CHECK(g0.out.empty());
    CHECK(run_cli({"spectrum", "--a", "-1", "--g", "1", "--emax", "10"}).code == 2);
    CHECK(run_cli({"spectrum", "--a", "1", "--g", "1", "--emax", "-3"}).code == 2);
    CHECK(run_cli({"spectrum", "--a", "1", "--g", "1"}).code == 2);
    CHECK(run_cli({"spectrum", "--a", "1", "--g", "1", "--emax", "10", "--format", "xml"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"reflectivity", "--a", "1", "--g", "1", "--emin", "5", "--emax", "2"}).code == 2);
    CHECK(run_cli({"ep-scan", "--a", "1", "--g-lo", "2", "--g-hi", "1"}).code == 2);
    const Run idx = run_cli({"eigenstate", "--a", "5", "--g", "1", "--index", "40"});
    CHECK(idx.code == 2);
    CHECK(idx.err.find("exceeds") != std::string::npos);
    // |V| passes the oracle seeding cap at every node.
    CHECK(run_cli({"oracle", "--a", "0.01", "--g", "1e12", "--n", "200"}).code == 3);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("reflectivity: strictly increasing E, five pole clusters and one hump at a = g = 1") {
    const Run r = run_cli({"reflectivity", "--a", "1", "--g", "1", "--emin", "0.1", "--emax", "45", "--npoints", "2000"});
    REQUIRE(r.code == 0);
    const Json d = json_of(r)["data"];
    const Json& s = d["series"];
    REQUIRE(s.size() == 2000);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i]["E"].get<double>() > s[i - 1]["E"].get<double>());
    CHECK(d["poles"].size() == 5);
    CHECK(d["humps"].size() == 1);
    CHECK(d["failed_points"] == 0);
}

TEST_CASE("eigenstate: real state report and the complex pair verdict") {
    const Run r0 = run_cli({"eigenstate", "--a", "1", "--g", "1", "--index", "0", "--check-pt"});
    REQUIRE(r0.code == 0);
    const Json d0 = json_of(r0)["data"];
    CHECK(d0["state"].size() == 4001);
    CHECK(d0["pt_report"]["pt_defect"].get<double>() < 1e-8);
    CHECK(d0["pt_report"]["even_defect"].get<double>() < 1e-8);
    CHECK(d0["pt_report"]["odd_defect"].get<double>() < 1e-8);

    const Run r5 = run_cli({"eigenstate", "--a", "1", "--g", "1", "--index", "5", "--check-pt", "--points", "2001"});
    REQUIRE(r5.code == 0);
    const Json d5 = json_of(r5)["data"];
    CHECK(d5["state"].size() == 2001);
    CHECK(d5["eigenvalue"]["im_E"].get<double>() < 0.0);
    CHECK(d5["pt_report"]["partner_index"] == 6);
    CHECK(d5["pt_report"]["verdict"] == "PT psi_5 = psi_6, alpha = 0.000 +- 1e-4");
    CHECK(d5["pt_report"]["pt_defect"].get<double>() < 1e-6);
    const Json& pv = d5["point_values"];
    CHECK(std::abs(pv[1]["re_psi"].get<double>() - 0.661638) < 1e-3);
    CHECK(std::abs(pv[0]["im_psi"].get<double>() + 0.201041) < 1e-3);
}

TEST_CASE("ep-scan at a = 1 and below the first coalescence") {
    const Run r = run_cli({"ep-scan", "--a", "1", "--g-lo", "0.1", "--g-hi", "6", "--traces"});
    REQUIRE(r.code == 0);
    const Json d = json_of(r)["data"];
    const double want[] = {0.74, 1.58, 5.35};
    for (double w : want) {
        int hits = 0;
        for (const auto& e : d["exceptional_points"])
            if (std::abs(e["g_star"].get<double>() - w) <= 0.01) ++hits;
        CHECK(hits == 1);
    }
    CHECK(d["branch_count"] == 13);
    CHECK(d["traces"].size() > 13);
    const Run e = run_cli({"ep-scan", "--a", "1", "--g-lo", "1.6", "--g-hi", "5.3", "--step", "0.05"});
    REQUIRE(e.code == 0);
    CHECK(json_of(e)["data"]["exceptional_points"].empty());
    CHECK(json_of(e)["data"]["branch_count"].get<int>() > 0);
}

TEST_CASE("oracle: delta column, conjugate symmetry and the complex pair verdict") {
    const Run r = run_cli({"oracle", "--a", "1", "--g", "1", "--compare-im", "2.6879", "--compare-im", "25.6883"});
    REQUIRE(r.code == 0);
    const Json d = json_of(r)["data"];
    int real = 0;
    for (const auto& e : d["eigenvalues"])
        if (e["kind"] == "real") {
            ++real;
            CHECK(e["delta"].get<double>() < 1e-3);
        }
    CHECK(real == 5);
    CHECK(d["conjugate_symmetry"]["holds"] == true);
    CHECK(d["unmatched_analytic"].empty());
    const Json& v = d["complex_pair_verdict"];
    CHECK(v["candidates"][0]["consistent"] == true);
    CHECK(v["candidates"][1]["consistent"] == false);
    CHECK(v["analytic_delta"].get<double>() < 1e-3);
}

TEST_CASE("selftest: injected tolerance fails with exit code 1 and per-suite counts") {
    const Run r = run_cli({"selftest", "--tolerance-scale", "1e-30"});
    CHECK(r.code == 1);
    const Json d = json_of(r)["data"];
    CHECK(d["all_passed"] == false);
    CHECK(d["suites"].size() == 8);
    for (const auto& s : d["suites"]) CHECK(s["total"].get<int>() > 0);
}

TEST_CASE("CSV and JSON carry identical payloads") {
    check_round_trip({"spectrum", "--a", "1", "--g", "1", "--emax", "30", "--complex-seeds", "37.58+2.69i"});
    check_round_trip({"reflectivity", "--a", "0.5", "--g", "1", "--emin", "1", "--emax", "60", "--npoints", "500"});
    check_round_trip({"eigenstate", "--a", "1", "--g", "1", "--index", "2", "--check-pt", "--points", "501"});
    check_round_trip({"ep-scan", "--a", "1", "--g-lo", "0.7", "--g-hi", "0.8", "--traces"});
    check_round_trip({"oracle", "--a", "5", "--g", "1", "--n", "1000"});
}

TEST_CASE("sequential runs reproduce the data bit for bit; threads do not change it") {
    const std::vector<std::string> args = {"reflectivity", "--a", "1", "--g", "1", "--npoints", "800"};
    auto data = [&](const std::string& threads) {
        std::vector<std::string> a = args;
        a.insert(a.begin(), {"--threads", threads});
        const Run r = run_cli(a);
        REQUIRE(r.code == 0);
        return json_of(r)["data"].dump();
    };
    const std::string one = data("1");
    CHECK(data("1") == one);
    CHECK(data("4") == one);
}

TEST_CASE("--output writes the document to a file") {
    const std::string path = "test_cli_output.csv";
    const Run r = run_cli({"--format", "csv", "--output", path, "spectrum", "--a", "5", "--g", "1", "--emax", "30"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto tables = read_csv_tables(ss.str());
    REQUIRE(tables.size() == 1);
    CHECK(tables[0].rows.size() == 1);
    std::remove(path.c_str());
    CHECK(run_cli({"--output", "/nonexistent-dir/x.json", "spectrum", "--a", "5", "--g", "1", "--emax", "30"}).code == 2);
}

TEST_CASE("global options also parse after the subcommand") {
    const Run r = run_cli({"spectrum", "--a", "5", "--g", "1", "--emax", "30", "--format", "csv", "--threads", "2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# manifest: ", 0) == 0);
}
