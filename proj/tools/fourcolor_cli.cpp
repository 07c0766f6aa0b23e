#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fourcolor/cartwheel.hpp"
#include "fourcolor/color.hpp"
#include "fourcolor/combine.hpp"
#include "fourcolor/gen.hpp"
#include "fourcolor/manifest.hpp"
#include "fourcolor/testpaths.hpp"

#ifdef FOURCOLOR_OPENMP
#include <omp.h>
#endif

using namespace fourcolor;

namespace {

int64_t ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 t0)
        .count();
}

void set_jobs(int jobs) {
#ifdef FOURCOLOR_OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
}

int cmd_validate(const std::string& path) {
    try {
        if (path.size() > 5 && path.substr(path.size() - 5) == ".conf") {
            Configuration c = load_config_file(path);
            FreeCompletion fc = free_completion(c);
            auto report = validate(fc.z);
            for (const Violation& v : report)
                std::cout << "violated " << requirement_name(v.requirement) << " witness "
                          << v.witness << "\n";
            std::cout << path << ": " << (report.empty() ? "ok" : "invalid") << ", vertices "
                      << c.config_order() << ", ring " << c.ring_size << "\n";
            return report.empty() ? 0 : 1;
        }
        RotationFile f = read_rotation_file(path);
        if (f.ring_size == 0) {
            EmbeddedTriangulation g;
            g.rot = f.rotations;
            auto issues = validate_triangulation(g);
            for (const std::string& s : issues) std::cout << s << "\n";
            std::cout << path << ": " << (issues.empty() ? "ok" : "invalid") << ", vertices "
                      << g.n() << "\n";
            return issues.empty() ? 0 : 1;
        }
        PseudoTriangulation z = from_rotations(f.n, f.rotations);
        auto report = validate(z);
        for (const Violation& v : report)
            std::cout << "violated " << requirement_name(v.requirement) << " witness " << v.witness
                      << "\n";
        std::cout << path << ": " << (report.empty() ? "ok" : "invalid") << "\n";
        return report.empty() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cout << path << ": error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_check_reducible(const std::vector<std::string>& files, const std::string& report_path) {
    std::vector<Configuration> configs;
    for (const std::string& f : files) {
        if (std::filesystem::is_directory(f)) {
            for (Configuration& c : load_config_directory(f)) configs.push_back(std::move(c));
        } else {
            configs.push_back(load_config_file(f));
        }
    }
    std::vector<std::string> lines(configs.size());
    bool all_reducible = true;
#ifdef FOURCOLOR_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (size_t i = 0; i < configs.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        ReducibilityResult r = check_d_reducibility(configs[i]);
        std::ostringstream os;
        os << configs[i].name << ": "
           << (r.d_reducible ? "D-reducible" : "not D-reducible") << ", max level "
           << r.max_level << ", ring " << r.ring_size << ", colorings " << r.proper_colorings
           << ", " << ms_since(t0) << " ms";
        if (r.d_reducible && r.max_level > 25) os << " [level above 25]";
        lines[i] = os.str();
        if (!r.d_reducible) all_reducible = false;
    }
    std::ostream* out = &std::cout;
    std::ofstream file_out;
    if (!report_path.empty()) {
        file_out.open(report_path);
        out = &file_out;
    }
    for (const std::string& l : lines) *out << l << "\n";
    if (!report_path.empty()) std::cout << "report written to " << report_path << "\n";
    return all_reducible ? 0 : 1;
}

int cmd_charge(const std::string& graph_path, const std::string& rules_path) {
    EmbeddedTriangulation g = read_triangulation(graph_path);
    RuleSet rules = load_rules_file(rules_path);
    ChargeLedger led = charge_ledger(g, rules);
    int32_t max_t = led.final_charge[0];
    for (int32_t t : led.final_charge) max_t = std::max(max_t, t);
    std::cout << "sum=" << led.total() << ", max T=" << max_t << "\n";
    bool bound_ok = true;
    for (VertexId v = 0; v < g.n(); ++v)
        if (led.final_charge[v] > 60 - 2 * g.degree(v)) bound_ok = false;
    std::cout << "vertex bound T <= 60-2d: " << (bound_ok ? "holds" : "VIOLATED") << "\n";
    return led.total() == 120 && bound_ok ? 0 : 1;
}

int cmd_combine_rules(const std::string& rules_path, const std::string& block,
                      const std::string& out_dir, bool progress) {
    RuleSet rules = load_rules_file(rules_path);
    std::vector<ExtendedConfiguration> blockers;
    if (!block.empty() && block != "none") blockers = build_dbar(load_config_directory(block));
    auto t0 = std::chrono::steady_clock::now();
    std::vector<CombinedRule> combined = combine_rules(rules, blockers, progress);
    int32_t max_charge = 0;
    for (const CombinedRule& c : combined) max_charge = std::max(max_charge, c.charge);
    std::vector<CombinedRule> carriers;
    for (const CombinedRule& c : combined)
        if (c.charge == max_charge) carriers.push_back(c);
    carriers = dedup_combined(carriers);
    std::cout << "rules " << rules.rules.size() << " (with mirrors), combinations "
              << combined.size() << ", max charge " << max_charge << ", max-charge carriers "
              << carriers.size() << ", " << ms_since(t0) << " ms\n";
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::vector<std::string> written;
        for (const CombinedRule& c : carriers) {
            uint64_t h = trace_hash(canonical_trace(c.carrier, c.send_dart));
            std::ostringstream name;
            name << out_dir << "/carrier_" << std::hex << h << ".cartwheel";
            std::ofstream f(name.str());
            f << write_cartwheel(c.carrier, c.carrier.z.head[c.send_dart]);
            written.push_back(name.str());
        }
        JobManifest m = make_manifest(
            "combine-rules", {{"rules", rules_path}, {"block", block.empty() ? "none" : block}},
            {rules_path},
            written,
            {{"max_charge", max_charge},
             {"carriers", static_cast<int64_t>(carriers.size())},
             {"combinations", static_cast<int64_t>(combined.size())}},
            ms_since(t0));
        write_manifest(m, out_dir + "/manifest.json");
        std::cout << "carriers written to " << out_dir << "\n";
    }
    return 0;
}

int cmd_enum_bad_cartwheels(const std::string& degree, const std::string& rules_path,
                            const std::string& configs_dir, const std::string& out_dir) {
    RuleSet rules = load_rules_file(rules_path);
    std::vector<ExtendedConfiguration> dbar = build_dbar(load_config_directory(configs_dir));
    std::cout << "combining rules against the configuration set..." << std::endl;
    std::vector<CombinedRule> combined = combine_rules(rules, dbar);
    CartwheelInputs in{&rules, &combined, &dbar};
    std::vector<int32_t> degrees;
    if (degree == "all") {
        degrees = {7, 8, 9, 10, 11};
    } else {
        degrees = {std::stoi(degree)};
    }
    auto t0 = std::chrono::steady_clock::now();
    try {
        EnumerationSummary s = enum_all_bad_cartwheels(degrees, in, out_dir);
        std::map<std::string, int64_t> counts{{"wheels", s.wheels}};
        for (auto [d, n] : s.survivors_by_degree) {
            std::cout << "center degree " << d << ": " << n << " survivors\n";
            counts["survivors_d" + std::to_string(d)] = n;
        }
        JobManifest m = make_manifest(
            "enum-bad-cartwheels",
            {{"degree", degree}, {"rules", rules_path}, {"configs", configs_dir}}, {rules_path},
            s.files, counts, ms_since(t0));
        write_manifest(m, out_dir + "/manifest.json");
        std::cout << "outputs in " << out_dir << "\n";
        return 0;
    } catch (const AssertionFailureError& e) {
        std::cerr << "assertion failure: " << e.what() << "\n";
        return 1;
    }
}

int cmd_check_combine(const std::string& mode, const std::string& cartwheels_dir,
                      const std::string& configs_dir, const std::string& exception_path) {
    std::vector<PseudoConfiguration> wheels = load_cartwheel_directory(cartwheels_dir);
    std::vector<ExtendedConfiguration> dbar = build_dbar(load_config_directory(configs_dir));
    CombineReport report;
    if (mode == "deg8") {
        if (exception_path.empty()) {
            std::cerr << "deg8 mode needs --exception FILE (the centered degree-8 pattern)\n";
            return 2;
        }
        report = check_deg8(wheels, dbar, load_config_file(exception_path));
    } else if (mode == "7triangle") {
        report = check_7triangle(wheels, dbar);
    } else if (mode == "deg7") {
        report = check_deg7(wheels, dbar);
    } else {
        std::cerr << "unknown mode " << mode << "\n";
        return 2;
    }
    std::cout << mode << ": " << (report.passed() ? "pass" : "FAIL") << ", combinations checked "
              << report.combinations_checked << ", failures " << report.failures.size() << "\n";
    int wi = 0;
    for (const auto& f : report.failures) {
        std::string path = cartwheels_dir + "/failure_" + std::to_string(wi++) + ".cartwheel";
        std::ofstream out(path);
        out << f.witness;
        std::cout << "  " << f.what << "; witness " << path << "\n";
    }
    return report.passed() ? 0 : 1;
}

int cmd_color(const std::string& in_path, const std::string& out_path, bool verify,
              const std::string& configs_dir, const std::string& rules_path, int random_n,
              uint64_t seed) {
    EmbeddedTriangulation g;
    if (random_n > 0) {
        g = random_triangulation(random_n, seed);
    } else {
        g = read_triangulation(in_path);
        auto issues = validate_triangulation(g);
        if (!issues.empty()) {
            std::cerr << "input is not a sphere triangulation: " << issues.front() << "\n";
            return 2;
        }
    }
    std::string cache;
    if (const char* env = std::getenv("FOURCOLOR_CACHE")) cache = env;
    ColorContext ctx =
        make_color_context(load_config_directory(configs_dir), load_rules_file(rules_path), cache);
    auto t0 = std::chrono::steady_clock::now();
    Coloring c = four_color(g, ctx);
    std::cout << "colored " << g.n() << " vertices in " << ms_since(t0) << " ms\n";
    if (verify) {
        bool ok = verify_coloring(g, c);
        std::cout << "verification: " << (ok ? "proper" : "IMPROPER") << "\n";
        if (!ok) return 1;
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        for (VertexId v = 0; v < g.n(); ++v) out << v << ' ' << c.color[v] + 1 << '\n';
        std::cout << "coloring written to " << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dart-based verification toolkit and 4-coloring engine for planar triangulations"};
    app.require_subcommand(1);
    int jobs = 0;
    app.add_option("--jobs", jobs, "worker thread count (0 = hardware default)");

    std::string data_default = test_data_dir();

    auto* validate_cmd = app.add_subcommand("validate", "validate a .rot or .conf file");
    std::string validate_path;
    validate_cmd->add_option("file", validate_path)->required();

    auto* reduce_cmd =
        app.add_subcommand("check-reducible", "D-reducibility verdicts for configurations");
    std::vector<std::string> reduce_files;
    std::string reduce_report;
    reduce_cmd->add_option("files", reduce_files, "configuration files or directories")
        ->required();
    reduce_cmd->add_option("--report", reduce_report, "write the per-config report to a file");

    auto* charge_cmd = app.add_subcommand("charge", "charge ledger of a sphere triangulation");
    std::string charge_graph, charge_rules = data_default + "/rules/sample.rules";
    charge_cmd->add_option("graph", charge_graph)->required();
    charge_cmd->add_option("--rules", charge_rules);

    auto* comb_cmd = app.add_subcommand("combine-rules", "free combinations of discharging rules");
    std::string comb_rules, comb_block = "none", comb_out;
    bool comb_progress = false;
    comb_cmd->add_option("rules", comb_rules)->required();
    comb_cmd->add_option("--block", comb_block, "configuration directory for blocking, or 'none'");
    comb_cmd->add_option("--out", comb_out, "directory for max-charge carriers");
    comb_cmd->add_flag("--progress", comb_progress);

    auto* enum_cmd = app.add_subcommand("enum-bad-cartwheels", "bad-cartwheel enumeration");
    std::string enum_degree = "all", enum_rules = data_default + "/rules/sample.rules";
    std::string enum_configs = data_default + "/dreducible", enum_out;
    enum_cmd->add_option("--degree", enum_degree, "7..11 or 'all'");
    enum_cmd->add_option("--rules", enum_rules);
    enum_cmd->add_option("--configs", enum_configs);
    enum_cmd->add_option("--out", enum_out)->required();

    auto* cc_cmd = app.add_subcommand("check-combine", "cartwheel combination checks");
    std::string cc_mode, cc_cartwheels, cc_configs = data_default + "/dreducible", cc_exception;
    cc_cmd->add_option("--mode", cc_mode, "deg8 | 7triangle | deg7")->required();
    cc_cmd->add_option("--cartwheels", cc_cartwheels)->required();
    cc_cmd->add_option("--configs", cc_configs);
    cc_cmd->add_option("--exception", cc_exception, "centered degree-8 pattern for deg8 mode");

    auto* color_cmd = app.add_subcommand("color", "4-color a planar triangulation");
    std::string color_in, color_out, color_configs = data_default + "/dreducible";
    std::string color_rules = data_default + "/rules/sample.rules";
    bool color_verify = false;
    int color_random = 0;
    uint64_t color_seed = 1;
    color_cmd->add_option("--in", color_in, "rotation-system file");
    color_cmd->add_option("--out", color_out, "output 'v color' lines");
    color_cmd->add_flag("--verify", color_verify);
    color_cmd->add_option("--configs", color_configs);
    color_cmd->add_option("--rules", color_rules);
    color_cmd->add_option("--random", color_random, "generate a random instance of this order");
    color_cmd->add_option("--seed", color_seed);

    CLI11_PARSE(app, argc, argv);
    set_jobs(jobs);
    try {
        if (*validate_cmd) return cmd_validate(validate_path);
        if (*reduce_cmd) return cmd_check_reducible(reduce_files, reduce_report);
        if (*charge_cmd) return cmd_charge(charge_graph, charge_rules);
        if (*comb_cmd) return cmd_combine_rules(comb_rules, comb_block, comb_out, comb_progress);
        if (*enum_cmd)
            return cmd_enum_bad_cartwheels(enum_degree, enum_rules, enum_configs, enum_out);
        if (*cc_cmd) return cmd_check_combine(cc_mode, cc_cartwheels, cc_configs, cc_exception);
        if (*color_cmd)
            return cmd_color(color_in, color_out, color_verify, color_configs, color_rules,
                             color_random, color_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
