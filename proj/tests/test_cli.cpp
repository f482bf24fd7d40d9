#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

namespace fs = std::filesystem;

namespace {

const std::string kCli = P2N_CLI_PATH;
const std::string kSamples = P2N_SAMPLES_DIR;

struct Run {
    int code;
    std::string out;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Run run(const std::string& args) {
    static std::atomic<int> counter{0};
    const fs::path out = fs::temp_directory_path() /
                         ("p2n_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".out");
    const int status = std::system((kCli + " " + args + " > " + out.string() + " 2>/dev/null").c_str());
    Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
    fs::remove(out);
    return r;
}

std::map<std::string, std::string> files_in(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
    return out;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("p2n_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    return p;
}

// Starts `coordinate` in the background and returns the address it listens on.
struct Coordinator {
    FILE* pipe = nullptr;
    std::string address;

    explicit Coordinator(const std::string& args) {
        pipe = ::popen((kCli + " coordinate --listen 127.0.0.1:0 " + args + " 2>/dev/null").c_str(), "r");
        REQUIRE(pipe);
        char line[256];
        REQUIRE(std::fgets(line, sizeof line, pipe));
        std::string s(line);
        REQUIRE(s.rfind("listening ", 0) == 0);
        address = s.substr(10, s.find_last_not_of("\r\n") - 9);
    }
    int finish() {
        char buf[256];
        while (std::fgets(buf, sizeof buf, pipe)) {
        }
        const int status = ::pclose(pipe);
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
};

}  // namespace

TEST_CASE("two cliques under single linkage agree with the declared modules") {
    const auto dir = scratch("cliques");
    auto r = run("cluster --input " + kSamples + "/two_cliques.p2n --linkage single --k 2 --out " + dir.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("agreement 1\n") != std::string::npos);
    CHECK(slurp(dir / "agreement.txt") == "rand_index 1\n");
    for (const char* f : {"dendrogram.json", "tree.nwk", "tree.dot", "assignment.csv", "report.txt",
                          "suggestions.csv", "agreement.txt"})
        CHECK(fs::exists(dir / f));
}

TEST_CASE("repeated runs are byte identical") {
    const auto a = scratch("rep_a"), b = scratch("rep_b");
    const std::string args = "cluster --input " + kSamples + "/shop.p2n --linkage wavg --k 3 --out ";
    REQUIRE(run(args + a.string()).code == 0);
    REQUIRE(run(args + b.string()).code == 0);
    CHECK(files_in(a) == files_in(b));
}

TEST_CASE("usage errors exit 1") {
    const std::string in = " --input " + kSamples + "/tiny.p2n";
    CHECK(run("cluster" + in + " --k 0").code == 1);
    CHECK(run("cluster" + in + " --k 99 --out " + scratch("k99").string()).code == 1);
    CHECK(run("cluster" + in + " --linkage median").code == 1);
    CHECK(run("cluster" + in + " --k 2 --threshold 0.5").code == 1);
    CHECK(run("cluster" + in + " --weight-ref -1").code == 1);
    CHECK(run("cluster").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("").code == 1);
}

TEST_CASE("input and degenerate errors") {
    const auto bad = scratch("bad.p2n");
    fs::create_directories(bad.parent_path());
    std::ofstream(bad) << "E a object - - m coded\nE a object - - m coded\n";
    CHECK(run("cluster --input " + bad.string()).code == 2);
    CHECK(run("validate --input " + bad.string()).code == 2);
    CHECK(run("cluster --input /nonexistent.p2n").code == 2);

    const auto flat = scratch("flat.p2n");
    std::ofstream(flat) << "E a object - - m coded\nE b object - - m coded\n";
    CHECK(run("cluster --input " + flat.string() + " --out " + scratch("flat_out").string()).code == 3);
    const auto one = scratch("one.p2n");
    std::ofstream(one) << "E a object - - m coded\n";
    CHECK(run("cluster --input " + one.string() + " --out " + scratch("one_out").string()).code == 3);
}

TEST_CASE("validate") {
    auto r = run("validate --input " + kSamples + "/tiny.p2n");
    CHECK(r.code == 0);
    CHECK(r.out == "ok: 3 entities, 2 relationships, 0 attributes\n");
}

TEST_CASE("compare-linkages prints a 4x4 table") {
    auto r = run("compare-linkages --input " + kSamples + "/two_cliques.p2n --k 2");
    CHECK(r.code == 0);
    CHECK(r.out ==
          "linkage\tsingle\tcomplete\twavg\tuavg\n"
          "single\t1\t1\t1\t1\n"
          "complete\t1\t1\t1\t1\n"
          "wavg\t1\t1\t1\t1\n"
          "uavg\t1\t1\t1\t1\n");
}

TEST_CASE("coordinate with two workers matches cluster") {
    const auto local = scratch("local"), dist = scratch("dist");
    const std::string flags = " --input " + kSamples + "/shop.p2n --linkage uavg --k 3 ";
    REQUIRE(run("cluster" + flags + "--out " + local.string()).code == 0);

    Coordinator coord(flags + "--workers 2 --out " + dist.string());
    int c1 = -1, c2 = -1;
    std::jthread w1([&] { c1 = run("worker --connect " + coord.address).code; });
    std::jthread w2([&] { c2 = run("worker --connect " + coord.address).code; });
    CHECK(coord.finish() == 0);
    w1.join();
    w2.join();
    // a worker that shows up after the coordinator has exited is refused (4)
    CHECK((c1 == 0 || c2 == 0));
    CHECK((c1 == 0 || c1 == 4));
    CHECK((c2 == 0 || c2 == 4));
    CHECK(files_in(local) == files_in(dist));
}

TEST_CASE("network failures exit 4") {
    CHECK(run("worker --connect 127.0.0.1:1").code == 4);
    Coordinator coord(" --input " + kSamples + "/tiny.p2n --startup-timeout 0.5 --out " + scratch("nobody").string());
    CHECK(coord.finish() == 4);
}
