#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "p2n/errors.hpp"
#include "p2n/ingest.hpp"

using namespace p2n;

namespace {

std::size_t error_line(std::string_view text) {
    try {
        parse_facts(text);
    } catch (const InputError& e) {
        return e.line();
    }
    FAIL("expected an InputError");
    return 0;
}

std::string error_text(std::string_view text) {
    try {
        parse_facts(text);
    } catch (const InputError& e) {
        return e.what();
    }
    FAIL("expected an InputError");
    return {};
}

}  // namespace

TEST_CASE("two objects and one reference") {
    auto doc = parse_facts("E a object - - m1 coded\nE b object - - m2 tested\nR ref a b\n");
    REQUIRE(doc.graph.size() == 2);
    REQUIRE(doc.graph.relationships().size() == 1);
    CHECK(doc.graph.relationships()[0] == Relationship{RelType::ref, "a", "b", 1.0});
    const Entity& a = doc.graph.entity(0);
    CHECK(a.id == "a");
    CHECK(a.kind == EntityKind::object);
    CHECK(a.coordinate == EntityCoordinate{"a", std::nullopt, std::nullopt});
    CHECK(a.declared_module == "m1");
    CHECK(a.status == Status::coded);
    CHECK(doc.graph.entity(1).status == Status::tested);
}

TEST_CASE("duplicate id names the second line") {
    const char* text = "E a object - - m1 coded\nE a object - - m2 tested\n";
    CHECK(error_line(text) == 2);
    CHECK(error_text(text).find("duplicate entity id 'a'") != std::string::npos);
}

TEST_CASE("part self loop is rejected at its line") {
    const char* text = "E a object - - m1 coded\nR part a a\n";
    CHECK(error_line(text) == 2);
    CHECK(error_text(text).find("self loop") != std::string::npos);
}

TEST_CASE("comments, blank lines, defaults and weights") {
    auto doc = parse_facts(
        "# header\n"
        "\n"
        "E o object - - mod -   # trailing comment\n"
        "E c class o - mod planned\n"
        "E m method o c mod tested\n"
        "R part o c\n"
        "R part c m 2.5\n"
        "R subclass m o 0\n"
        "A m loc 12\n"
        "A m fan_in -3e2\n");
    CHECK(doc.graph.entity(2).status == Status::planned);  // "o" sorts last
    CHECK(doc.graph.entity(0).coordinate == EntityCoordinate{"o", "c", std::nullopt});
    CHECK(doc.graph.entity(1).coordinate == EntityCoordinate{"o", "c", "m"});
    CHECK(doc.graph.relationships()[1].weight == 2.5);
    CHECK(doc.graph.relationships()[2].weight == 0.0);
    REQUIRE(doc.attributes.size() == 2);
    CHECK(doc.attributes[0] == UserAttribute{"m", "fan_in", -300.0});
    CHECK(doc.attributes[1] == UserAttribute{"m", "loc", 12.0});
}

TEST_CASE("error paths carry line numbers") {
    const std::string e = "E a object - - m coded\n";
    CHECK(error_line(e + "E b widget - - m coded\n") == 2);         // unknown kind
    CHECK(error_line(e + "E b object - - m done\n") == 2);          // unknown status
    CHECK(error_line(e + "R uses a a\n") == 2);                     // unknown rel type
    CHECK(error_line(e + "E b object - - m coded extra\n") == 2);   // trailing field
    CHECK(error_line(e + "E b object - - m\n") == 2);               // too few fields
    CHECK(error_line(e + "R ref a b\n") == 2);                      // dangling endpoint
    CHECK(error_line(e + "A a loc nan\n") == 2);                    // non-finite value
    CHECK(error_line(e + "A a loc inf\n") == 2);
    CHECK(error_line(e + "A a loc 1\nA a loc 2\n") == 3);           // duplicate attribute
    CHECK(error_line(e + "A ghost loc 1\n") == 2);                  // unknown entity
    CHECK(error_line(e + "E b object - - m coded\nR ref a b -1\n") == 3);  // negative weight
    CHECK(error_line(e + "E b object - - m coded\nR ref a b x\n") == 3);
    CHECK(error_line(e + "X a\n") == 2);                            // unknown record
    CHECK(error_line(e + "E c class - - m coded\n") == 2);          // class without object
    CHECK(error_line(e + "E c method a - m coded\n") == 2);         // method without class
    CHECK(error_line(e + "E c object a - m coded\n") == 2);         // object inside object
    CHECK(error_line("E - object - - m coded\n") == 1);
}

TEST_CASE("relationships may precede their endpoints") {
    auto doc = parse_facts("R ref a b\nE b object - - m coded\nE a object - - m coded\n");
    CHECK(doc.graph.relationships().size() == 1);
}

TEST_CASE("part cycles are rejected") {
    CHECK_THROWS_AS(parse_facts("E a object - - m -\nE b object - - m -\nR part a b\nR part b a\n"), InputError);
}

TEST_CASE("permuting E lines gives the same graph") {
    std::vector<std::string> lines;
    for (int i = 0; i < 30; ++i) lines.push_back("E e" + std::to_string(i) + " object - - m" + std::to_string(i % 3) + " tested\n");
    const std::string rels = "R ref e1 e2\nR part e3 e4 2\n";
    std::string base;
    for (const auto& l : lines) base += l;
    const auto expected = parse_facts(base + rels);

    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(lines.begin(), lines.end(), rng);
        std::string text;
        for (const auto& l : lines) text += l;
        CHECK(parse_facts(text + rels) == expected);
    }
}

TEST_CASE("write then parse reproduces random documents") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> real(-1e6, 1e6);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 20);
        std::string text;
        for (int i = 0; i < n; ++i) {
            const char* kinds[] = {"object - -", "class o0 -", "method o0 c0"};
            const char* statuses[] = {"planned", "coded", "tested", "-"};
            text += "E n" + std::to_string(i) + " " + kinds[rng() % 3] + " mod" + std::to_string(rng() % 4) + " " +
                    statuses[rng() % 4] + "\n";
        }
        for (int r = 0; r < n; ++r) {
            int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a == b) continue;
            // part edges only go "downwards" so no cycle can form
            const char* type = a < b ? "part" : (rng() % 2 ? "subclass" : "ref");
            text += std::string("R ") + type + " n" + std::to_string(a) + " n" + std::to_string(b) + " " +
                    std::to_string(std::abs(real(rng))) + "\n";
        }
        for (int i = 0; i < n; i += 2) text += "A n" + std::to_string(i) + " metric " + std::to_string(real(rng)) + "\n";

        const auto doc = parse_facts(text);
        const auto again = parse_facts(write_facts(doc));
        CHECK(again == doc);
        CHECK(write_facts(again) == write_facts(doc));
    }
}

TEST_CASE("sample corpora load") {
    for (const auto& entry : std::filesystem::directory_iterator(P2N_SAMPLES_DIR)) {
        if (entry.path().extension() != ".p2n") continue;
        CAPTURE(entry.path().string());
        auto doc = load_facts(entry.path().string());
        CHECK(doc.graph.size() >= 2);
    }
    CHECK_THROWS_AS(load_facts("/nonexistent/file.p2n"), InputError);
}
