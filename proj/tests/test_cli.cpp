#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <tailsel/copula.hpp>
#include <tailsel/rng.hpp>

#include "helpers.hpp"

using nlohmann::json;
using helpers::run_cli;

namespace {

// 300 rows: one tail-dependent feature, two noise columns, default target name
std::string planted_csv() {
    static const std::string path = [] {
        const std::string file = helpers::temp_path("cli_planted.csv");
        const tailsel::PseudoSample pair = tailsel::sample_conditional(4.0, 300, 424242);
        tailsel::Rng rng(11);
        std::string csv = "Planted,n1,n2,Diabetes_binary\n";
        char line[160];
        for (std::size_t i = 0; i < 300; ++i) {
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%d\n", pair.u[i],
                          rng.uniform_open(), rng.uniform_open(), pair.v[i] > 0.5 ? 1 : 0);
            csv += line;
        }
        helpers::write_file(file, csv);
        return file;
    }();
    return path;
}

}  // namespace

TEST_CASE("rank subcommand writes the ranking it prints", "[cli]") {
    const std::string csv = planted_csv();
    const std::string stem = helpers::temp_path("cli_rank");
    const std::string out = helpers::temp_path("cli_rank_stdout");
    const int rc = run_cli("rank --input " + csv + " --k 2 --no-timing --output " + stem, out);
    REQUIRE(rc == 0);

    const std::string body = helpers::read_file(stem + ".json");
    REQUIRE(body == helpers::read_file(out));

    const json doc = json::parse(body);
    REQUIRE(doc.at("command") == "rank");
    REQUIRE(doc.at("method") == "a2");
    REQUIRE(doc.at("config").at("k") == 2);
    REQUIRE(doc.at("selected").size() == 2);
    REQUIRE(doc.at("selected")[0] == "Planted");
    REQUIRE(doc.at("ranking").size() == 3);
    REQUIRE(doc.at("ranking")[0].at("feature") == "Planted");
    REQUIRE_FALSE(doc.contains("timing"));
}

TEST_CASE("rank supports every selector and the text format", "[cli]") {
    const std::string csv = planted_csv();
    const std::string mi_stem = helpers::temp_path("cli_rank_mi");
    REQUIRE(run_cli("rank --method mi --input " + csv + " --k 1 --output " + mi_stem) == 0);
    const json mi = json::parse(helpers::read_file(mi_stem + ".json"));
    REQUIRE(mi.at("scores").size() == 3);
    REQUIRE(mi.at("selected").size() == 1);

    const std::string ga_stem = helpers::temp_path("cli_rank_ga");
    REQUIRE(run_cli("rank --method ga --input " + csv + " --k 2 --output " + ga_stem) == 0);
    const json ga = json::parse(helpers::read_file(ga_stem + ".json"));
    REQUIRE(ga.at("selected").size() == 2);
    REQUIRE(ga.at("evaluations").get<std::size_t>() > 0);

    const std::string txt_stem = helpers::temp_path("cli_rank_txt");
    REQUIRE(run_cli("rank --format text --k 2 --input " + csv + " --output " + txt_stem) == 0);
    const std::string text = helpers::read_file(txt_stem + ".txt");
    REQUIRE(text.find("Planted") != std::string::npos);
    REQUIRE(text.find("lambda_u") != std::string::npos);
}

TEST_CASE("fit-copula reports one pair", "[cli]") {
    const std::string csv = planted_csv();
    const std::string stem = helpers::temp_path("cli_fit");
    REQUIRE(run_cli("fit-copula --input " + csv + " --feature Planted --output " + stem) == 0);
    const json doc = json::parse(helpers::read_file(stem + ".json"));
    REQUIRE(doc.at("command") == "fit-copula");
    REQUIRE(doc.at("feature") == "Planted");
    REQUIRE(doc.at("theta").get<double>() >= 1.0);
    REQUIRE(doc.at("lambda_u").get<double>() > 0.0);
    REQUIRE(doc.at("lambda_u").get<double>() < 1.0);
    REQUIRE(doc.at("rows") == 300);
}

TEST_CASE("failures exit with code 1 and a staged message", "[cli]") {
    const std::string err = helpers::temp_path("cli_err");
    REQUIRE(run_cli("rank --input /no/such/file.csv", "/dev/null", err) == 1);
    REQUIRE(helpers::read_file(err).find("error: load:") != std::string::npos);

    REQUIRE(run_cli("fit-copula --input " + planted_csv() + " --feature Bogus", "/dev/null",
                    err) == 1);
    REQUIRE(helpers::read_file(err).find("unknown feature 'Bogus'") != std::string::npos);

    REQUIRE(run_cli("benchmark --input " + planted_csv() + " --select-on sideways",
                    "/dev/null", err) == 1);
    REQUIRE(helpers::read_file(err).find("error: config:") != std::string::npos);

    // no default target column and none was named
    const std::string other = helpers::temp_path("cli_other.csv");
    helpers::write_file(other, "a,b,y\n1,2,0\n3,4,1\n5,6,0\n2,1,1\n7,7,0\n8,1,1\n"
                               "4,2,0\n6,3,1\n9,5,0\n2,8,1\n1,9,0\n3,3,1\n");
    REQUIRE(run_cli("rank --input " + other, "/dev/null", err) == 1);
    REQUIRE(helpers::read_file(err).find("Diabetes_binary") != std::string::npos);
    REQUIRE(run_cli("rank --input " + other + " --target y --k 1 --output " +
                    helpers::temp_path("cli_named_target")) == 0);
}

TEST_CASE("usage errors exit with code 2", "[cli]") {
    REQUIRE(run_cli("") == 2);
    REQUIRE(run_cli("frobnicate") == 2);
    REQUIRE(run_cli("rank") == 2);  // --input is required
    REQUIRE(run_cli("--help") == 0);
    REQUIRE(run_cli("rank --help") == 0);
}

TEST_CASE("benchmark produces its three artifacts deterministically", "[cli]") {
    const std::string csv = planted_csv();
    const std::string a = helpers::temp_path("cli_bench_a");
    const std::string b = helpers::temp_path("cli_bench_b");

    REQUIRE(run_cli("benchmark --input " + csv +
                    " --k 2 --repeats 3 --no-timing --threads 1 --output " + a) == 0);
    REQUIRE(run_cli("benchmark --input " + csv +
                    " --k 2 --repeats 3 --no-timing --threads 3 --output " + b) == 0);

    const std::string report = helpers::read_file(a + ".json");
    const json doc = json::parse(report);
    REQUIRE(doc.at("cells").size() == 16);
    REQUIRE(doc.at("selections").contains("A2"));
    REQUIRE_FALSE(doc.at("config").contains("threads"));

    // byte-identical artifacts regardless of worker count
    REQUIRE(report == helpers::read_file(b + ".json"));
    REQUIRE(helpers::read_file(a + ".txt") == helpers::read_file(b + ".txt"));
    REQUIRE(helpers::read_file(a + "_importance.csv") ==
            helpers::read_file(b + "_importance.csv"));
    REQUIRE(helpers::read_file(a + "_importance.csv").rfind("feature,mean_drop\n", 0) == 0);
}

TEST_CASE("a config file fills in flags without overriding them", "[cli]") {
    const std::string csv = planted_csv();
    const std::string conf = helpers::temp_path("cli_conf.json");
    helpers::write_file(conf, "{\"k\": 1, \"seed\": 9, \"no-timing\": true}\n");

    const std::string stem = helpers::temp_path("cli_conf_rank");
    REQUIRE(run_cli("rank --input " + csv + " --config " + conf + " --output " + stem) == 0);
    json doc = json::parse(helpers::read_file(stem + ".json"));
    REQUIRE(doc.at("selected").size() == 1);
    REQUIRE(doc.at("config").at("seed") == 9);

    // an explicit flag beats the file
    REQUIRE(run_cli("rank --input " + csv + " --k 2 --config " + conf + " --output " + stem) ==
            0);
    doc = json::parse(helpers::read_file(stem + ".json"));
    REQUIRE(doc.at("selected").size() == 2);

    const std::string err = helpers::temp_path("cli_conf_err");
    helpers::write_file(conf, "{\"wibble\": 1}\n");
    REQUIRE(run_cli("rank --input " + csv + " --config " + conf, "/dev/null", err) == 1);
    REQUIRE(helpers::read_file(err).find("unknown key 'wibble'") != std::string::npos);

    helpers::write_file(conf, "not json");
    REQUIRE(run_cli("rank --input " + csv + " --config " + conf, "/dev/null", err) == 1);
    REQUIRE(helpers::read_file(err).find("invalid JSON") != std::string::npos);
}
