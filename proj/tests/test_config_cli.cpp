#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fluxtune/config.hpp"
#include "fluxtune/constants.hpp"
#include "fluxtune/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace fluxtune;

namespace {

const char* kMinimalConfig = R"({
  "device": {
    "ej_ghz": 300.0,
    "ec_ghz": 2.0,
    "l0_nh": 0.06192867473,
    "lr_nh": 12.29291953901,
    "cavity_ghz": 2.00005254655
  }
})";

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string temp_path(const std::string& name)
{
    const char* dir = std::getenv("TMPDIR");
    return std::string(dir ? dir : "/tmp") + "/fluxtune_test_" + name;
}

} // namespace

TEST_CASE("minimal config takes all defaults")
{
    const RunConfig c = parse_config_text(kMinimalConfig);
    CHECK(c.device.ej_ghz == 300.0);
    CHECK(c.device.m3_phi0_per_A == 35.0);
    CHECK(c.target_delta_e_ghz == c.device.cavity_ghz);
    CHECK(c.n_fock == 15);
    CHECK(c.n_charge == 20);
    CHECK(c.engine == Engine::exact);
    CHECK(c.variant == perturb::Variant::full);
    CHECK(c.form == AtomForm::exact);
    CHECK(c.f_grid.start_pi == 0.995);
    CHECK(c.f_grid.stop_pi == 0.9995);
    CHECK(c.f_grid.points == 200);

    const std::vector<double> grid = c.grid_radians();
    REQUIRE(grid.size() == 200);
    CHECK(grid.front() == doctest::Approx(0.995 * constants::pi));
    CHECK(grid.back() == doctest::Approx(0.9995 * constants::pi));
}

TEST_CASE("strict schema errors")
{
    SUBCASE("empty document lists the required device fields")
    {
        CHECK_THROWS_WITH_AS(parse_config_text("{}"),
                             doctest::Contains("ej_ghz"), ConfigError);
        CHECK_THROWS_WITH_AS(parse_config_text(R"({"device": {}})"),
                             doctest::Contains("cavity_ghz"), ConfigError);
    }

    SUBCASE("unknown keys are rejected with their path")
    {
        std::string text = kMinimalConfig;
        text.insert(text.rfind('}'), R"(, "engin": "exact")");
        CHECK_THROWS_WITH_AS(parse_config_text(text),
                             doctest::Contains("engin"), ConfigError);

        std::string nested = R"({
          "device": {
            "ej_ghz": 300.0, "ec_ghz": 2.0, "l0_nh": 0.06192867473,
            "lr_nh": 12.29291953901, "cavity_ghz": 2.00005254655,
            "loop_inductance": 1.0
          }
        })";
        CHECK_THROWS_WITH_AS(parse_config_text(nested),
                             doctest::Contains("device.loop_inductance"),
                             ConfigError);
    }

    SUBCASE("grid invariants")
    {
        std::string text = kMinimalConfig;
        text.insert(text.rfind('}'),
                    R"(, "f_grid": {"start_pi": 0.99, "stop_pi": 1.0,
                        "points": 10})");
        CHECK_THROWS_AS(parse_config_text(text), ConfigError);

        std::string one = kMinimalConfig;
        one.insert(one.rfind('}'),
                   R"(, "f_grid": {"start_pi": 0.99, "stop_pi": 0.999,
                       "points": 1})");
        CHECK_THROWS_AS(parse_config_text(one), ConfigError);
    }

    SUBCASE("malformed JSON and bad enumerations")
    {
        CHECK_THROWS_AS(parse_config_text("{ nope"), ConfigError);
        std::string text = kMinimalConfig;
        text.insert(text.rfind('}'), R"(, "engine": "magic")");
        CHECK_THROWS_WITH_AS(parse_config_text(text),
                             doctest::Contains("engine"), ConfigError);
    }
}

TEST_CASE("config serialization round-trips")
{
    const RunConfig c = parse_config_text(kMinimalConfig);
    const std::string dumped = dump_config(c);
    const RunConfig back = parse_config_text(dumped);
    CHECK(dump_config(back) == dumped);
    CHECK(back.device.lr_nH == c.device.lr_nH);
    CHECK(back.target_delta_e_ghz == c.target_delta_e_ghz);
    CHECK(back.solve_tol_ghz == c.solve_tol_ghz);
}

TEST_CASE("double formatting round-trips")
{
    for (double v : {0.0, 1.0, -1.5, 2.00005254655, 1e-300, 3.141592653589793,
                     0.1, 1.0 / 3.0, 6.62607015e-34}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("fnv1a64 known vectors")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("CSV emission round-trips through a parse")
{
    ResultTable t;
    t.columns = {"f", "label", "flag", "count"};
    t.provenance = {{"tool", "fluxtune"}, {"note", "has, comma"}};
    t.add_row({1.0 / 3.0, std::string("plain"), true, std::int64_t{7}});
    t.add_row({2.00005254655, std::string("quote\"and,comma"), false,
               std::int64_t{-3}});

    const std::string csv = to_csv(t);
    CHECK(csv.find("# note: has, comma") != std::string::npos);

    // Parse it back with a minimal RFC-4180 reader and re-emit: the output
    // must be byte-identical (shortest-round-trip doubles make this exact).
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> body;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty() && line[0] != '#') {
            body.push_back(line);
        }
    }
    REQUIRE(body.size() == 3); // header + 2 rows

    auto split_csv = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        bool quoted = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const char ch = s[i];
            if (quoted) {
                if (ch == '"' && i + 1 < s.size() && s[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else if (ch == '"') {
                    quoted = false;
                } else {
                    cur.push_back(ch);
                }
            } else if (ch == '"') {
                quoted = true;
            } else if (ch == ',') {
                out.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        out.push_back(cur);
        return out;
    };

    ResultTable re;
    re.columns = split_csv(body[0]);
    re.provenance = t.provenance;
    const std::vector<Cell> proto = t.rows[0];
    for (std::size_t r = 1; r < body.size(); ++r) {
        const std::vector<std::string> fields = split_csv(body[r]);
        REQUIRE(fields.size() == re.columns.size());
        std::vector<Cell> row;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (std::holds_alternative<double>(proto[c])) {
                row.emplace_back(std::stod(fields[c]));
            } else if (std::holds_alternative<std::int64_t>(proto[c])) {
                row.emplace_back(
                    static_cast<std::int64_t>(std::stoll(fields[c])));
            } else if (std::holds_alternative<bool>(proto[c])) {
                row.emplace_back(fields[c] == "true");
            } else {
                row.emplace_back(fields[c]);
            }
        }
        re.add_row(std::move(row));
    }
    CHECK(to_csv(re) == csv);
}

TEST_CASE("write_table writes complete files")
{
    ResultTable t;
    t.columns = {"x"};
    t.add_row({1.25});
    const std::string path = temp_path("table.csv");
    write_table(t, OutputFormat::csv, path);
    const std::string content = slurp(path);
    CHECK(content == to_csv(t));
    std::remove(path.c_str());
    CHECK(parse_format("json") == OutputFormat::json);
    CHECK_THROWS_AS(parse_format("yaml"), std::invalid_argument);
}

TEST_CASE("command-line interface end to end")
{
    const char* cli = std::getenv("FLUXTUNE_CLI");
    REQUIRE_MESSAGE(cli != nullptr,
                    "FLUXTUNE_CLI must point at the fluxtune binary");

    const std::string cfg = temp_path("cli_config.json");
    {
        std::ofstream out(cfg, std::ios::binary);
        out << kMinimalConfig;
    }
    const std::string out1 = temp_path("cli_out1.csv");
    const std::string out2 = temp_path("cli_out2.csv");

    SUBCASE("derive runs deterministically")
    {
        const std::string base = std::string(cli) +
                                 " derive --config " + cfg + " --out ";
        REQUIRE(std::system((base + out1).c_str()) == 0);
        REQUIRE(std::system((base + out2).c_str()) == 0);
        const std::string a = slurp(out1);
        CHECK(a == slurp(out2));
        CHECK(a.find("eb_ghz") != std::string::npos);
        CHECK(a.find("bound_uh") != std::string::npos);
        CHECK(a.find("# config_fnv1a64: ") != std::string::npos);
    }

    SUBCASE("json format is selectable")
    {
        const std::string cmd = std::string(cli) + " validate --config " +
                                cfg + " --format json --out " + out1;
        REQUIRE(std::system(cmd.c_str()) == 0);
        const std::string text = slurp(out1);
        CHECK(text.find("\"provenance\"") != std::string::npos);
        CHECK(text.find("\"rows\"") != std::string::npos);
    }

    SUBCASE("bad config yields a structured error and exit code 2")
    {
        const std::string bad = temp_path("cli_bad.json");
        {
            std::ofstream out(bad, std::ios::binary);
            out << R"({"device": {"ej_ghz": 300.0}})";
        }
        const std::string err = temp_path("cli_err.txt");
        const std::string cmd = std::string(cli) + " derive --config " + bad +
                                " 2> " + err + " > /dev/null";
        const int rc = std::system(cmd.c_str());
        REQUIRE(rc != -1);
        CHECK(WEXITSTATUS(rc) == 2);
        const std::string text = slurp(err);
        CHECK(text.find("\"error\"") != std::string::npos);
        CHECK(text.find("ec_ghz") != std::string::npos);
        std::remove(bad.c_str());
        std::remove(err.c_str());
    }

    std::remove(cfg.c_str());
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}
