// p2n: recover subsystem structure from a facts file.
//
//   p2n cluster --input sys.p2n --linkage uavg --k 4 --out out/
//   p2n compare-linkages --input sys.p2n --k 4
//   p2n coordinate --input sys.p2n --listen 0.0.0.0:7070 --out out/
//   p2n worker --connect host:7070
//   p2n validate --input sys.p2n

#include <cmath>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "p2n/distnet.hpp"
#include "p2n/errors.hpp"
#include "p2n/ingest.hpp"
#include "p2n/numfmt.hpp"
#include "p2n/pipeline.hpp"

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kInput = 2, kDegenerate = 3, kNetwork = 4 };

struct RunConfig {
    std::string input;
    std::string linkage = "uavg";
    std::optional<long long> k;
    std::optional<double> threshold;
    double weight_part = 1.0;
    double weight_subclass = 1.0;
    double weight_ref = 1.0;
    std::string out = "p2n-out";
    std::string listen = "127.0.0.1:7070";
    std::string connect = "127.0.0.1:7070";
    double task_timeout = 30.0;
    double startup_timeout = 60.0;
    std::size_t workers = 1;
    std::string worker_id = "worker";
    unsigned threads = 1;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

p2n::PipelineConfig pipeline_config(const RunConfig& rc) {
    p2n::PipelineConfig pc;
    auto linkage = p2n::parse_linkage(rc.linkage);
    if (!linkage) throw UsageError("unknown linkage '" + rc.linkage + "'");
    pc.linkage = *linkage;
    if (rc.k) {
        if (*rc.k < 1) throw UsageError("--k must be at least 1");
        pc.k = static_cast<std::size_t>(*rc.k);
    }
    if (rc.threshold) {
        if (!(*rc.threshold > 0.0)) throw UsageError("--threshold must be positive");
        pc.threshold = rc.threshold;
    }
    for (double w : {rc.weight_part, rc.weight_subclass, rc.weight_ref}) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw UsageError("relation weights must be finite and nonnegative");
    }
    pc.weights = {rc.weight_part, rc.weight_subclass, rc.weight_ref};
    pc.threads = rc.threads;
    return pc;
}

std::chrono::milliseconds seconds(double s) {
    if (!(s > 0.0)) throw UsageError("timeouts must be positive");
    return std::chrono::milliseconds(static_cast<long long>(s * 1000.0));
}

void print_summary(const p2n::FactsDocument& doc, const p2n::PipelineResult& r, const std::string& out) {
    std::cout << "entities " << doc.graph.size() << "\n"
              << "clusters " << r.assignment.k << "\n"
              << "suggestions " << r.suggestions.size() << "\n"
              << "saturation " << p2n::format_double(r.report.overall_saturation) << "\n"
              << "agreement " << p2n::format_double(r.agreement) << "\n"
              << "outputs " << out << "\n";
}

int cmd_cluster(const RunConfig& rc) {
    const auto pc = pipeline_config(rc);
    const auto doc = p2n::load_facts(rc.input);
    const auto result = p2n::run_pipeline(doc, pc);
    p2n::write_outputs(rc.out, doc, result);
    print_summary(doc, result, rc.out);
    return kOk;
}

int cmd_compare_linkages(const RunConfig& rc) {
    const auto pc = pipeline_config(rc);
    const auto doc = p2n::load_facts(rc.input);
    std::cout << p2n::compare_linkages(doc, pc).to_text();
    return kOk;
}

int cmd_coordinate(const RunConfig& rc) {
    const auto pc = pipeline_config(rc);
    const auto doc = p2n::load_facts(rc.input);

    std::mutex log_mu;
    p2n::CoordinatorOptions opts;
    opts.startup_timeout = seconds(rc.startup_timeout);
    opts.task_timeout = seconds(rc.task_timeout);
    opts.planned_workers = std::max<std::size_t>(1, rc.workers);
    opts.log = [&log_mu](const std::string& line) {
        std::lock_guard lk(log_mu);
        std::cerr << "coordinator: " << line << "\n";
    };

    p2n::Coordinator coordinator(p2n::net::parse_endpoint(rc.listen), opts);
    std::cout << "listening " << coordinator.endpoint().to_string() << std::endl;
    const auto result = p2n::run_pipeline(doc, pc, [&](const p2n::FeatureMatrix& m) { return coordinator.run(m); });
    p2n::write_outputs(rc.out, doc, result);
    print_summary(doc, result, rc.out);
    return kOk;
}

int cmd_worker(const RunConfig& rc) {
    const auto done = p2n::serve_worker(p2n::net::parse_endpoint(rc.connect), {rc.worker_id});
    std::cerr << "worker: completed " << done << " tasks\n";
    return kOk;
}

int cmd_validate(const RunConfig& rc) {
    const auto doc = p2n::load_facts(rc.input);
    std::cout << "ok: " << doc.graph.size() << " entities, " << doc.graph.relationships().size()
              << " relationships, " << doc.attributes.size() << " attributes\n";
    return kOk;
}

void add_input(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--input", rc.input, "Facts file (.p2n)")->required();
}

void add_clustering(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--linkage", rc.linkage, "single | complete | wavg | uavg")->capture_default_str();
    auto* k = cmd->add_option("--k", rc.k, "Number of clusters (default: number of declared modules)");
    auto* t = cmd->add_option("--threshold", rc.threshold, "Keep merges with similarity >= threshold");
    k->excludes(t);
    cmd->add_option("--weight-part", rc.weight_part)->capture_default_str();
    cmd->add_option("--weight-subclass", rc.weight_subclass)->capture_default_str();
    cmd->add_option("--weight-ref", rc.weight_ref)->capture_default_str();
    cmd->add_option("--threads", rc.threads, "Threads for the local similarity matrix")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recover subsystem structure from a software facts file"};
    app.require_subcommand(1);
    RunConfig rc;

    auto* cluster = app.add_subcommand("cluster", "Cluster entities and write all outputs");
    add_input(cluster, rc);
    add_clustering(cluster, rc);
    cluster->add_option("--out", rc.out, "Output directory")->capture_default_str();

    auto* compare = app.add_subcommand("compare-linkages", "Pairwise Rand index between the four linkages");
    add_input(compare, rc);
    add_clustering(compare, rc);

    auto* coord = app.add_subcommand("coordinate", "Cluster with distributed similarity computation");
    add_input(coord, rc);
    add_clustering(coord, rc);
    coord->add_option("--out", rc.out, "Output directory")->capture_default_str();
    coord->add_option("--listen", rc.listen, "host:port to accept workers on (port 0 picks one)")
        ->capture_default_str();
    coord->add_option("--task-timeout", rc.task_timeout, "Seconds before a task is reassigned")->capture_default_str();
    coord->add_option("--startup-timeout", rc.startup_timeout, "Seconds to wait for the first worker")
        ->capture_default_str();
    coord->add_option("--workers", rc.workers, "Expected worker count, used to size tasks")->capture_default_str();

    auto* worker = app.add_subcommand("worker", "Compute similarity rows for a coordinator");
    worker->add_option("--connect", rc.connect, "Coordinator host:port")->capture_default_str();
    worker->add_option("--worker-id", rc.worker_id)->capture_default_str();

    auto* validate = app.add_subcommand("validate", "Parse and validate a facts file");
    add_input(validate, rc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*cluster) return cmd_cluster(rc);
        if (*compare) return cmd_compare_linkages(rc);
        if (*coord) return cmd_coordinate(rc);
        if (*worker) return cmd_worker(rc);
        if (*validate) return cmd_validate(rc);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const p2n::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const p2n::DegenerateInput& e) {
        std::cerr << "degenerate input: " << e.what() << "\n";
        return kDegenerate;
    } catch (const p2n::NetworkError& e) {
        std::cerr << "network error: " << e.what() << "\n";
        return kNetwork;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
