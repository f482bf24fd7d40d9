#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "p2n/errors.hpp"
#include "p2n/pipeline.hpp"

using namespace p2n;

namespace {

FactsDocument sample(const std::string& name) { return load_facts(std::string(P2N_SAMPLES_DIR) + "/" + name); }

}  // namespace

TEST_CASE("two cliques are recovered by every linkage") {
    const auto doc = sample("two_cliques.p2n");
    for (auto l : kAllLinkages) {
        CAPTURE(to_string(l));
        PipelineConfig cfg;
        cfg.linkage = l;
        cfg.k = 2;
        auto r = run_pipeline(doc, cfg);
        CHECK(r.assignment.labels == std::vector<std::size_t>{0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
        CHECK(r.agreement == 1.0);
        CHECK(r.suggestions.empty());
        CHECK(r.report.total_tested == 6);
    }
}

TEST_CASE("default cut uses the declared module count") {
    const auto doc = sample("two_cliques.p2n");
    auto r = run_pipeline(doc, {});
    CHECK(r.assignment.k == 2);
}

TEST_CASE("threshold cut") {
    const auto doc = sample("two_cliques.p2n");
    PipelineConfig cfg;
    cfg.threshold = 1e300;
    CHECK(run_pipeline(doc, cfg).assignment.k == 10);
    cfg.k = 2;
    CHECK_THROWS_AS(run_pipeline(doc, cfg), std::invalid_argument);
}

TEST_CASE("a custom similarity source is used") {
    const auto doc = sample("shop.p2n");
    bool called = false;
    auto r = run_pipeline(doc, {}, [&](const FeatureMatrix& m) {
        called = true;
        return similarity_matrix(m, 3);
    });
    CHECK(called);
    CHECK(render_outputs(doc, r) == render_outputs(doc, run_pipeline(doc, {})));
}

TEST_CASE("rendered outputs") {
    const auto doc = sample("shop.p2n");
    PipelineConfig cfg;
    cfg.k = 3;
    auto files = render_outputs(doc, run_pipeline(doc, cfg));
    for (const char* name : {"dendrogram.json", "tree.nwk", "tree.dot", "assignment.csv", "report.txt",
                             "suggestions.csv", "agreement.txt"})
        CHECK(files.count(name) == 1);

    CHECK(files["assignment.csv"].rfind("entity,cluster\n", 0) == 0);
    CHECK(files["suggestions.csv"].rfind("entity,from_module,to_module\n", 0) == 0);
    CHECK(files["agreement.txt"].rfind("rand_index ", 0) == 0);
    auto dendro = nlohmann::json::parse(files["dendrogram.json"]);
    CHECK(dendro["n"] == doc.graph.size());
    CHECK(dendro["merges"].size() == doc.graph.size() - 1);
    CHECK(files["tree.nwk"].back() == '\n');

    std::size_t lines = 0;
    std::istringstream in(files["assignment.csv"]);
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == doc.graph.size() + 1);
}

TEST_CASE("outputs are written to disk and are reproducible") {
    const auto doc = sample("shop.p2n");
    const auto dir = std::filesystem::temp_directory_path() / "p2n_pipeline_test";
    std::filesystem::remove_all(dir);
    write_outputs(dir / "nested", doc, run_pipeline(doc, {}));
    const auto files = render_outputs(doc, run_pipeline(doc, {}));
    for (const auto& [name, content] : files) {
        std::ifstream f(dir / "nested" / name, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        CHECK(ss.str() == content);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("degenerate corpora") {
    CHECK_THROWS_AS(run_pipeline(parse_facts("E a object - - m -\n"), {}), DegenerateInput);
    // no relationships and no attributes: every column constant
    CHECK_THROWS_AS(run_pipeline(parse_facts("E a object - - m -\nE b object - - m -\n"), {}), DegenerateInput);
}

TEST_CASE("linkage comparison") {
    const auto doc = sample("two_cliques.p2n");
    PipelineConfig cfg;
    cfg.k = 2;
    auto cmp = compare_linkages(doc, cfg);
    for (auto& row : cmp.rand_index)
        for (double v : row) CHECK(v == 1.0);
    CHECK(cmp.to_text().rfind("linkage\tsingle\tcomplete\twavg\tuavg\n", 0) == 0);

    auto tiny = sample("tiny.p2n");
    auto t = compare_linkages(tiny, {});
    for (std::size_t a = 0; a < 4; ++a) CHECK(t.rand_index[a][a] == 1.0);

    auto two = parse_facts("E a object - - m -\nE b object - - n -\nR ref a b\nA a size 1\n");
    auto c2 = compare_linkages(two, {});
    for (auto& row : c2.rand_index)
        for (double v : row) CHECK(v == 1.0);
}
