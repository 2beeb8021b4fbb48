#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include <json.hpp>

#include "sensornet/fusion.hpp"
#include "sensornet/io.hpp"
#include "sensornet/topology.hpp"
#include "support/testutil.hpp"

using nlohmann::json;
using testutil::CliResult;
using testutil::run_cli;
using testutil::write_temp;

namespace {

std::string bits_file(const std::string& name, const std::vector<int>& bits) {
    std::string contents;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        contents += "{\"sensor\": " + std::to_string(i + 1) +
                    ", \"bit\": " + std::to_string(bits[i]) + "}\n";
    }
    return write_temp(name, contents);
}

std::string values_file(const std::string& name, const std::vector<double>& values) {
    std::string contents;
    for (std::size_t i = 0; i < values.size(); ++i) {
        json record;
        record["sensor"] = static_cast<int>(i + 1);
        record["value"] = values[i];
        contents += record.dump() + "\n";
    }
    return write_temp(name, contents);
}

std::string intervals_file(const std::string& name,
                           const std::vector<std::pair<double, double>>& spans) {
    std::string contents;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        json record;
        record["sensor"] = static_cast<int>(i + 1);
        record["lo"] = spans[i].first;
        record["hi"] = spans[i].second;
        contents += record.dump() + "\n";
    }
    return write_temp(name, contents);
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("fuse majority vote from a readings file") {
    const std::string path = bits_file("majority.jsonl", {0, 1, 1, 0, 1});
    const CliResult result = run_cli({"fuse", "--fn", "majority", path});
    CHECK(result.exit_code == 0);
    CHECK(contains(result.out, "function: majority"));
    CHECK(contains(result.out, "inputs: 5\n"));
    CHECK(contains(result.out, "fused: 1\n"));
    CHECK(result.err.empty());

    // Identical invocations print identical reports.
    const CliResult again = run_cli({"fuse", "--fn", "majority", path});
    CHECK(again.out == result.out);
}

TEST_CASE("structured fuse output round-trips exactly") {
    const std::string path = values_file("mean.jsonl", {1.0, 2.0, 2.0});
    const CliResult result =
        run_cli({"fuse", "--fn", "mean", "--format", "structured", path});
    REQUIRE(result.exit_code == 0);
    const json doc = json::parse(result.out);
    sensornet::OpCounters counters;
    const double direct =
        sensornet::fuse_crisp(std::vector<double>{1.0, 2.0, 2.0},
                              sensornet::CrispKind::Mean, counters);
    CHECK(doc["fused"]["type"] == "value");
    CHECK(doc["fused"]["value"].get<double>() == direct);
    CHECK(doc["counters"]["additions"].get<std::uint64_t>() == counters.additions);
    CHECK(doc["counters"]["divisions"].get<std::uint64_t>() == 1);
    CHECK(doc["inputs"] == 3);
}

TEST_CASE("fuse interval functions against the worked values") {
    const std::string path =
        intervals_file("marzullo.jsonl", {{8.0, 12.0}, {11.0, 13.0}, {14.0, 15.0}});
    const CliResult table = run_cli({"fuse", "--fn", "marzullo", "--f", "1", path});
    CHECK(table.exit_code == 0);
    CHECK(contains(table.out, "fused: [11, 12]\n"));

    const CliResult structured =
        run_cli({"fuse", "--fn", "marzullo", "--f", "1", "--format", "structured", path});
    REQUIRE(structured.exit_code == 0);
    const json doc = json::parse(structured.out);
    CHECK(doc["fused"]["type"] == "interval");
    CHECK(doc["fused"]["lo"].get<double>() == 11.0);
    CHECK(doc["fused"]["hi"].get<double>() == 12.0);

    const CliResult schmid =
        run_cli({"fuse", "--fn", "schmid_schossmaier", "--f", "1", path});
    CHECK(schmid.exit_code == 0);
    CHECK(contains(schmid.out, "fused: [11, 13]\n"));

    const CliResult no_overlap = run_cli({"fuse", "--fn", "marzullo", "--f", "0", path});
    CHECK(no_overlap.exit_code == 1);
    CHECK(contains(no_overlap.err, "error: NoIntersection"));
}

TEST_CASE("fuse applies a symmetric or skewed tolerance to crisp readings") {
    const std::string path = values_file("tolfuse.jsonl", {5.0, 5.5, 6.0});
    const CliResult result = run_cli({"fuse", "--fn", "marzullo", "--f", "0", "--tol-left",
                                      "1", "--tol-right", "1", path});
    CHECK(result.exit_code == 0);
    CHECK(contains(result.out, "fused: [5, 6]\n"));

    // A tolerance option without its partner is a usage error.
    const CliResult lonely =
        run_cli({"fuse", "--fn", "marzullo", "--f", "0", "--tol-left", "1", path});
    CHECK(lonely.exit_code == 2);

    // Crisp readings without a tolerance cannot feed an interval function.
    const CliResult untagged = run_cli({"fuse", "--fn", "marzullo", "--f", "0", path});
    CHECK(untagged.exit_code == 1);
    CHECK(contains(untagged.err, "error: TypeMismatch"));
}

TEST_CASE("fuse fault-bound handling per function") {
    const std::string crisp = values_file("faults.jsonl", {1.0, 2.0, 3.0});
    const CliResult f_on_mean = run_cli({"fuse", "--fn", "mean", "--f", "1", crisp});
    CHECK(f_on_mean.exit_code == 1);
    CHECK(contains(f_on_mean.err, "error: InvalidFaultBound"));

    const std::string spans = intervals_file("faults2.jsonl", {{0.0, 2.0}, {1.0, 3.0}});
    const CliResult missing_f = run_cli({"fuse", "--fn", "marzullo", spans});
    CHECK(missing_f.exit_code == 1);
    CHECK(contains(missing_f.err, "error: InvalidFaultBound"));

    const CliResult trimmed =
        run_cli({"fuse", "--fn", "trimmed_midpoint", "--f", "1", crisp});
    CHECK(trimmed.exit_code == 0);
    CHECK(contains(trimmed.out, "fused: 2\n"));
}

TEST_CASE("fuse reports io and parse failures with nonzero status") {
    const CliResult missing = run_cli({"fuse", "--fn", "mean", "/nonexistent/readings"});
    CHECK(missing.exit_code == 1);
    CHECK(contains(missing.err, "error: IoError"));

    const std::string bad =
        write_temp("bad.jsonl", "{\"sensor\": 1, \"value\": 2}\nnot json\n");
    const CliResult parse = run_cli({"fuse", "--fn", "mean", bad});
    CHECK(parse.exit_code == 1);
    CHECK(contains(parse.err, "error: ParseError"));
    CHECK(contains(parse.err, "line 2"));

    const std::string empty = write_temp("empty.jsonl", "\n\n");
    const CliResult none = run_cli({"fuse", "--fn", "mean", empty});
    CHECK(none.exit_code == 1);
    CHECK(contains(none.err, "error: EmptyInput"));
}

TEST_CASE("topo reports measured and predicted delay") {
    const CliResult line = run_cli({"topo", "--kind", "line", "--n", "5"});
    CHECK(line.exit_code == 0);
    CHECK(contains(line.out, "kind: line"));
    CHECK(contains(line.out, "nodes: 5\n"));
    CHECK(contains(line.out, "edges: 4\n"));
    CHECK(contains(line.out, "measured_delay: 4\n"));
    CHECK(contains(line.out, "predicted_delay: 4\n"));

    const CliResult tree = run_cli(
        {"topo", "--kind", "qary_tree", "--n", "6", "--q", "2", "--link-delay", "3"});
    CHECK(tree.exit_code == 0);
    CHECK(contains(tree.out, "nodes: 7\n"));
    CHECK(contains(tree.out, "measured_delay: 6\n"));
    CHECK(contains(tree.out, "predicted_delay: 6\n"));

    const CliResult ring =
        run_cli({"topo", "--kind", "ring", "--n", "8", "--link-delay", "2"});
    CHECK(contains(ring.out, "measured_delay: 8\n"));

    const CliResult clique =
        run_cli({"topo", "--kind", "clique", "--n", "6", "--link-delay", "0.5"});
    CHECK(contains(clique.out, "measured_delay: 0.5\n"));

    const CliResult structured =
        run_cli({"topo", "--kind", "line", "--n", "5", "--format", "structured"});
    REQUIRE(structured.exit_code == 0);
    const json doc = json::parse(structured.out);
    CHECK(doc["measured_delay"].get<double>() == 4.0);
    CHECK(doc["predicted_delay"].get<double>() == 4.0);
    CHECK(doc["nodes"] == 5);

    const CliResult invalid = run_cli({"topo", "--kind", "qary_tree", "--n", "5", "--q", "2"});
    CHECK(invalid.exit_code == 1);
    CHECK(contains(invalid.err, "error: InvalidTreeSize"));
}

TEST_CASE("entropy of stock topology files matches the reference values") {
    const std::string star = write_temp("star.json", "{\"kind\": \"hub_spoke\", \"n\": 4}");
    const CliResult star_run = run_cli({"entropy", star});
    CHECK(star_run.exit_code == 0);
    CHECK(contains(star_run.out, "entropy_bits: 1.7925\n"));
    CHECK(contains(star_run.out, "node 0: degree 3, p = 0.5000"));

    const std::string line = write_temp("line.json", "{\"kind\": \"line\", \"n\": 4}");
    CHECK(contains(run_cli({"entropy", line}).out, "entropy_bits: 1.9183\n"));

    const std::string ring = write_temp("ring.json", "{\"kind\": \"ring\", \"n\": 8}");
    CHECK(contains(run_cli({"entropy", ring}).out, "entropy_bits: 3.0000\n"));

    const CliResult structured = run_cli({"entropy", "--format", "structured", star});
    REQUIRE(structured.exit_code == 0);
    const json doc = json::parse(structured.out);
    const double direct =
        sensornet::graph_entropy(sensornet::build_topology(sensornet::TopologyKind::HubSpoke, 4));
    CHECK(doc["entropy_bits"].get<double>() == direct);
    CHECK(doc["pmf"].size() == 4);
    CHECK(doc["pmf"][0]["p"].get<double>() == 0.5);
}

TEST_CASE("entropy accepts custom topology files") {
    const std::string path = write_temp("custom.json", R"({
        "kind": "custom",
        "nodes": [{"id": 0, "role": "base_station"}, 1, 2, 3],
        "edges": [[0, 1], [1, 2], [1, 3]]
    })");
    const CliResult result = run_cli({"entropy", path});
    CHECK(result.exit_code == 0);
    CHECK(contains(result.out, "nodes: 4\n"));
    CHECK(contains(result.out, "edges: 3\n"));
    CHECK(contains(result.out, "entropy_bits: 1.7925\n"));

    // The base_station field promotes a bare-integer node.
    const std::string promoted = write_temp("custom2.json", R"({
        "kind": "custom",
        "nodes": [0, 1, 2],
        "edges": [[0, 1], [1, 2]],
        "base_station": 1
    })");
    CHECK(run_cli({"entropy", promoted}).exit_code == 0);

    const std::string headless = write_temp("custom3.json", R"({
        "kind": "custom",
        "nodes": [0, 1, 2],
        "edges": [[0, 1], [1, 2]]
    })");
    const CliResult no_bs = run_cli({"entropy", headless});
    CHECK(no_bs.exit_code == 1);
    CHECK(contains(no_bs.err, "error: InvalidTopology"));
}

TEST_CASE("simulate runs hierarchical aggregation end to end") {
    const std::string topo =
        write_temp("simtree.json", "{\"kind\": \"qary_tree\", \"n\": 6, \"q\": 2}");
    const std::string readings =
        values_file("simmin.jsonl", {4.0, 9.0, 1.0, 7.0, 3.0, 8.0});
    const CliResult result = run_cli({"simulate", "--spec", "min", topo, readings});
    CHECK(result.exit_code == 0);
    CHECK(contains(result.out, "mode: hierarchical"));
    CHECK(contains(result.out, "fused: 1\n"));
    CHECK(contains(result.out, "total_delay: 2\n"));
    CHECK(contains(result.out, "hops_on_critical_path: 2\n"));
    CHECK(contains(result.out, "comparisons: 5\n"));

    const CliResult structured =
        run_cli({"simulate", "--spec", "min", "--format", "structured", topo, readings});
    REQUIRE(structured.exit_code == 0);
    const json doc = json::parse(structured.out);
    CHECK(doc["fused"]["value"].get<double>() == 1.0);
    CHECK(doc["actions"]["0"] == "finalize");
    CHECK(doc["actions"]["1"] == "combine_partial");
    CHECK(doc["actions"]["2"] == "combine_partial");
    CHECK(doc["actions"]["3"] == "forward_raw");
    CHECK(doc["actions"]["6"] == "forward_raw");

    // Median of {1, 3, 4, 7, 8, 9} under the lower-of-middles default.
    const CliResult central = run_cli({"simulate", "--spec", "median", topo, readings});
    CHECK(central.exit_code == 0);
    CHECK(contains(central.out, "mode: centralized"));
    CHECK(contains(central.out, "fused: 4\n"));
}

TEST_CASE("simulate leaf-only mode and coverage errors") {
    const std::string topo =
        write_temp("simtree2.json", "{\"kind\": \"qary_tree\", \"n\": 6, \"q\": 2}");
    std::string leaf_records;
    for (int id = 3; id <= 6; ++id) {
        leaf_records += "{\"sensor\": " + std::to_string(id) +
                        ", \"value\": " + std::to_string(id) + "}\n";
    }
    const std::string leaves = write_temp("simleaves.jsonl", leaf_records);
    const CliResult result =
        run_cli({"simulate", "--spec", "mean", "--leaf-only", topo, leaves});
    CHECK(result.exit_code == 0);
    CHECK(contains(result.out, "fused: 4.5\n"));
    CHECK(contains(result.out, "total_delay: 2\n"));

    // Without --leaf-only the internal nodes must report too.
    const CliResult incomplete = run_cli({"simulate", "--spec", "mean", topo, leaves});
    CHECK(incomplete.exit_code == 1);
    CHECK(contains(incomplete.err, "error: IncompleteReadings"));

    const std::string duplicated = write_temp(
        "simdup.jsonl", "{\"sensor\": 3, \"value\": 1}\n{\"sensor\": 3, \"value\": 2}\n");
    const CliResult dup =
        run_cli({"simulate", "--spec", "mean", "--leaf-only", topo, duplicated});
    CHECK(dup.exit_code == 1);
    CHECK(contains(dup.err, "error: IncompleteReadings"));
}

TEST_CASE("simulate majority over a line with a boolean payload") {
    const std::string topo = write_temp("simline.json", "{\"kind\": \"line\", \"n\": 4}");
    const std::string readings = bits_file("simbits.jsonl", {1, 0, 1});
    const CliResult result = run_cli({"simulate", "--spec", "majority", topo, readings});
    CHECK(result.exit_code == 0);
    CHECK(contains(result.out, "mode: hierarchical"));
    CHECK(contains(result.out, "fused: 1\n"));
    CHECK(contains(result.out, "total_delay: 3\n"));
}

TEST_CASE("extremal ranks degree shapes and checks the extremes") {
    const CliResult result = run_cli({"extremal", "--n", "5"});
    CHECK(result.exit_code == 0);
    CHECK(contains(result.out, "total_labeled_trees: 125\n"));
    CHECK(contains(result.out, "path_attains_max: true"));
    CHECK(contains(result.out, "star_attains_min: true"));
    CHECK(contains(result.out, "degrees [2 2 2 1 1]"));
    CHECK(contains(result.out, "degrees [4 1 1 1 1]"));

    const CliResult structured = run_cli({"extremal", "--n", "4", "--format", "structured"});
    REQUIRE(structured.exit_code == 0);
    const json doc = json::parse(structured.out);
    CHECK(doc["total_labeled_trees"] == 16);
    REQUIRE(doc["ranking"].size() == 2);
    CHECK(doc["ranking"][0]["degrees"] == json::array({2, 2, 1, 1}));
    CHECK(doc["ranking"][0]["labeled_trees"] == 12);
    CHECK(doc["ranking"][1]["labeled_trees"] == 4);
    CHECK(doc["path_attains_max"] == true);
    CHECK(doc["star_attains_min"] == true);

    const CliResult too_large = run_cli({"extremal", "--n", "10"});
    CHECK(too_large.exit_code == 1);
    CHECK(contains(too_large.err, "error: TooLarge"));
}

TEST_CASE("usage errors exit with status 2 and domain errors with 1") {
    CHECK(run_cli({"frobnicate"}).exit_code == 2);
    CHECK(run_cli({}).exit_code == 2);
    CHECK(run_cli({"fuse"}).exit_code == 2);  // missing --fn and readings
    CHECK(run_cli({"fuse", "--fn", "sum", "x"}).exit_code == 2);  // not a known function
    CHECK(run_cli({"topo", "--kind", "moebius", "--n", "5"}).exit_code == 2);
    CHECK(run_cli({"topo", "--kind", "line", "--n", "5", "--wat"}).exit_code == 2);

    const CliResult unknown = run_cli({"frobnicate"});
    CHECK(contains(unknown.err, "error:"));

    const CliResult domain = run_cli({"topo", "--kind", "line", "--n", "1"});
    CHECK(domain.exit_code == 1);
    CHECK(contains(domain.err, "error: InvalidSize"));
}

TEST_CASE("help is printed on request with a zero exit") {
    const CliResult top = run_cli({"--help"});
    CHECK(top.exit_code == 0);
    CHECK(contains(top.out, "sensornet"));
    CHECK(contains(top.out, "fuse"));
    CHECK(contains(top.out, "simulate"));

    const CliResult sub = run_cli({"fuse", "--help"});
    CHECK(sub.exit_code == 0);
    CHECK(contains(sub.out, "--fn"));
}
