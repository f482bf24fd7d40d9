#include <doctest.h>

#include <random>
#include <stdexcept>

#include <json.hpp>

#include "oracles.hpp"
#include "p2n/ingest.hpp"
#include "p2n/restructure.hpp"

using namespace p2n;

namespace {

// x:M1, y:M2, z:M2 plus w:M3; statuses picked for the saturation checks
const char* kFacts =
    "E w object - - M3 tested\n"
    "E x object - - M1 tested\n"
    "E y object - - M2 planned\n"
    "E z object - - M2 tested\n";

}  // namespace

TEST_CASE("partition into nodes") {
    auto doc = parse_facts("E a object - - m -\nE b object - - m -\nE c object - - m -\n");
    auto p = partition_to_nodes({{0, 0, 1}, 2}, doc.graph);
    REQUIRE(p.nodes.size() == 2);
    CHECK(p.nodes[0].node_id == 0);
    CHECK(p.nodes[0].members == std::vector<std::string>{"a", "b"});
    CHECK(p.nodes[1].members == std::vector<std::string>{"c"});

    CHECK(partition_to_nodes({{0, 0, 0}, 1}, doc.graph).nodes.size() == 1);
    CHECK(partition_to_nodes({{0, 1, 2}, 3}, doc.graph).nodes.size() == 3);
    CHECK_THROWS_AS(partition_to_nodes({{0, 0}, 1}, doc.graph), std::invalid_argument);
}

TEST_CASE("saturation") {
    auto doc = parse_facts(
        "E a object - - m tested\nE b object - - m tested\nE c object - - m tested\nE d object - - m coded\n");
    CHECK(saturation(Node{0, {"a", "b", "c", "d"}}, doc.graph) == 0.75);
    CHECK(saturation(Node{0, {"d"}}, doc.graph) == 0.0);
    CHECK(saturation(Node{0, {"a", "b"}}, doc.graph) == 1.0);
    CHECK(saturation(Node{0, {"d", "c", "b", "a"}}, doc.graph) == 0.75);
    CHECK_THROWS_AS(saturation(Node{0, {}}, doc.graph), std::invalid_argument);
}

TEST_CASE("move suggestions use a strict majority") {
    auto doc = parse_facts(kFacts);  // indices: w=0 x=1 y=2 z=3
    CHECK(suggest_moves(doc.graph, {{0, 1, 1, 1}, 2}) == std::vector<MoveSuggestion>{{"x", "M1", "M2"}});
    CHECK(suggest_moves(doc.graph, {{0, 1, 2, 2}, 3}).empty());
    CHECK(suggest_moves(doc.graph, {{0, 1, 1, 2}, 3}).empty());  // {x:M1, y:M2} tie
}

TEST_CASE("rand index") {
    std::vector<std::size_t> a{0, 0, 1}, b{0, 1, 1};
    CHECK(agreement(a, a) == 1.0);
    CHECK(agreement(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(agreement(std::vector<std::size_t>{0, 0}, std::vector<std::size_t>{0, 1}) == 0.0);
    CHECK_THROWS_AS(agreement(std::vector<std::size_t>{0}, std::vector<std::size_t>{0}), std::invalid_argument);
    CHECK_THROWS_AS(agreement(a, std::vector<std::size_t>{0, 1}), std::invalid_argument);
}

TEST_CASE("rand index matches pair enumeration") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 40;
        std::vector<std::size_t> a(n), b(n);
        const std::size_t ka = 1 + rng() % 5, kb = 1 + rng() % 5;
        for (auto& x : a) x = rng() % ka;
        for (auto& x : b) x = rng() % kb;
        CHECK(agreement(a, b) == doctest::Approx(oracle::rand_index(a, b)).epsilon(1e-15));
        CHECK(agreement(a, b) == agreement(b, a));
        // relabeling does not change the partition
        std::vector<std::size_t> shifted(a);
        for (auto& x : shifted) x += 7;
        CHECK(agreement(a, shifted) == 1.0);
    }
}

TEST_CASE("declared partition numbers modules by first appearance") {
    auto doc = parse_facts(kFacts);
    CHECK(declared_partition(doc.graph) == std::vector<std::size_t>{0, 1, 2, 2});
}

TEST_CASE("maintenance table") {
    using C = MaintenanceCategory;
    CHECK(classify_maintenance(Quality::modifiability) == std::vector<C>{C::corrective, C::adaptability});
    CHECK(classify_maintenance(Quality::efficiency) == std::vector<C>{C::perfection});
    CHECK(classify_maintenance(Quality::intelligibility) == std::vector<C>{C::corrective});
    CHECK(classify_maintenance("usability") == std::vector<C>{C::adaptability, C::perfection});
    CHECK_THROWS_AS(classify_maintenance("beauty"), std::invalid_argument);

    std::size_t marks = 0;
    for (auto q : {Quality::intelligibility, Quality::testability, Quality::modifiability, Quality::reliability,
                   Quality::portability, Quality::usability, Quality::efficiency}) {
        marks += classify_maintenance(q).size();
        CHECK(classify_maintenance(to_string(q)) == classify_maintenance(q));
    }
    CHECK(marks == 9);
}

TEST_CASE("progress report totals") {
    std::string text;
    for (int i = 0; i < 7; ++i)
        text += "E e" + std::to_string(i) + " object - - m " + (i == 3 ? "coded" : "tested") + "\n";
    auto doc = parse_facts(text);
    auto report = progress_report(doc.graph, partition_to_nodes({{0, 0, 0, 0, 1, 1, 1}, 2}, doc.graph));
    REQUIRE(report.nodes.size() == 2);
    CHECK(report.nodes[0].saturation == 0.75);
    CHECK(report.nodes[1].saturation == 1.0);
    CHECK(report.total_members == 7);
    CHECK(report.total_tested == 6);
    CHECK(report.overall_saturation == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
    CHECK(report.to_text().find("total\t7\t6\t") != std::string::npos);

    auto json = nlohmann::json::parse(report.to_json());
    CHECK(json["nodes"].size() == 2);
    CHECK(json["total_tested"] == 6);
}

TEST_CASE("single tested entity") {
    auto doc = parse_facts("E a object - - m tested\n");
    auto report = progress_report(doc.graph, partition_to_nodes({{0}, 1}, doc.graph));
    CHECK(report.nodes.size() == 1);
    CHECK(report.overall_saturation == 1.0);
}

TEST_CASE("overall saturation does not depend on the partition") {
    std::mt19937_64 rng(4);
    std::string text;
    for (int i = 0; i < 20; ++i)
        text += "E e" + std::to_string(i) + " object - - m " + (rng() % 3 ? "tested" : "planned") + "\n";
    auto doc = parse_facts(text);
    const double base = progress_report(doc.graph, partition_to_nodes({std::vector<std::size_t>(20, 0), 1}, doc.graph))
                            .overall_saturation;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::size_t> labels(20);
        for (std::size_t i = 0; i < 20; ++i) labels[i] = i % (trial + 1);
        auto r = progress_report(doc.graph, partition_to_nodes({labels, static_cast<std::size_t>(trial + 1)}, doc.graph));
        CHECK(r.overall_saturation == base);
    }
}
