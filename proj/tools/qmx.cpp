// batch front-end: every pipeline in the library behind one executable,
// emitting deterministic JSON reports (sorted keys, seeded randomness)

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmx/json_io.hpp"
#include "qmx/verify.hpp"

namespace {

struct OutputSink {
    std::string file; // --out
    std::string dir;  // --out-dir, defaults from QMX_OUTPUT_DIR

    // stdout always gets the report; a copy lands on disk when a target
    // is configured (bare --out names resolve inside the directory)
    void emit(const qmx::Json& report, const std::string& fallback_name) const {
        std::string text = report.dump(2);
        std::cout << text << "\n";
        std::filesystem::path target;
        if (!file.empty()) {
            target = file;
            if (target.is_relative() && !dir.empty())
                target = std::filesystem::path(dir) / target;
        } else if (!dir.empty()) {
            target = std::filesystem::path(dir) / fallback_name;
        } else {
            return;
        }
        if (target.has_parent_path())
            std::filesystem::create_directories(target.parent_path());
        std::ofstream out(target);
        if (!out) throw qmx::error("cannot write report to " + target.string());
        out << text << "\n";
    }
};

void add_output_options(CLI::App* cmd, OutputSink& sink) {
    cmd->add_option("--out", sink.file, "also write the report to this file");
    cmd->add_option("--out-dir", sink.dir, "directory for report files")
        ->envname("QMX_OUTPUT_DIR");
}

qmx::Json report_head(const std::string& command, int n) {
    return qmx::Json{{"schema", "qmx-report/1"}, {"command", command}, {"n", n}};
}

// closed form for the center of the minor torus: pair level i with level n+i,
// plus the full determinant on its own
qmx::IntMat paired_minor_lattice(const qmx::MatrixIndexing& ix) {
    const int n = ix.n;
    qmx::IntMat m(static_cast<std::size_t>(ix.N));
    for (int i = 1; i < n; ++i) {
        std::vector<qmx::Int> row(static_cast<std::size_t>(ix.N), 0);
        row[static_cast<std::size_t>(ix.f(i) - 1)] = 1;
        row[static_cast<std::size_t>(ix.f(n + i) - 1)] = -1;
        m.rows.push_back(std::move(row));
    }
    std::vector<qmx::Int> det(static_cast<std::size_t>(ix.N), 0);
    det[static_cast<std::size_t>(ix.f(n) - 1)] = 1;
    m.rows.push_back(std::move(det));
    return m;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact workbench for quantum matrix algebras and their tori"};
    app.require_subcommand(1);
    int rc = 0;

    // ---- minor ----------------------------------------------------------
    auto* minor_cmd = app.add_subcommand("minor", "print a quantum minor in normal form");
    int minor_n = 2;
    std::vector<int> minor_rows, minor_cols;
    OutputSink minor_out;
    minor_cmd->add_option("--n", minor_n, "matrix size")->required()->check(CLI::Range(1, 4));
    minor_cmd->add_option("--rows", minor_rows, "row set, e.g. 1,2")
        ->required()
        ->delimiter(',');
    minor_cmd->add_option("--cols", minor_cols, "column set, e.g. 1,2")
        ->required()
        ->delimiter(',');
    add_output_options(minor_cmd, minor_out);
    minor_cmd->callback([&] {
        qmx::PresPtr p = qmx::build_presentation(minor_n);
        qmx::MatrixIndexing ix(minor_n);
        qmx::PBWElement m = qmx::quantum_minor(p, ix, minor_rows, minor_cols);
        qmx::Json rep = report_head("minor", minor_n);
        rep["rows"] = minor_rows;
        rep["cols"] = minor_cols;
        rep["minor"] = qmx::to_json(m);
        minor_out.emit(rep, "qmx-minor.json");
    });

    // ---- presentation ---------------------------------------------------
    auto* pres_cmd = app.add_subcommand("presentation", "dump the generator presentation");
    int pres_n = 2;
    OutputSink pres_out;
    pres_cmd->add_option("--n", pres_n, "matrix size")->required()->check(CLI::Range(1, 4));
    add_output_options(pres_cmd, pres_out);
    pres_cmd->callback([&] {
        qmx::PresPtr p = qmx::build_presentation(pres_n);
        qmx::MatrixIndexing ix(pres_n);
        qmx::Json rep = report_head("presentation", pres_n);
        rep["presentation"] = qmx::to_json(*p);
        rep["indexing"] = qmx::to_json(ix);
        pres_out.emit(rep, "qmx-presentation.json");
    });

    // ---- cauchon --------------------------------------------------------
    auto* cau_cmd = app.add_subcommand("cauchon", "run the deleting-derivations tower");
    int cau_n = 2;
    bool cau_trace = false, cau_ca1 = false;
    OutputSink cau_out;
    cau_cmd->add_option("--n", cau_n, "matrix size")->required()->check(CLI::Range(1, 3));
    cau_cmd->add_flag("--trace", cau_trace, "record generator expressions at every stage");
    cau_cmd->add_flag("--verify-ca1", cau_ca1,
                      "check the final generators against the minor description");
    add_output_options(cau_cmd, cau_out);
    cau_cmd->callback([&] {
        qmx::CauchonRun run = qmx::run_cauchon(cau_n, cau_trace);
        qmx::Json rep = report_head("cauchon", cau_n);
        rep["run"] = qmx::to_json(run);
        if (cau_ca1) {
            qmx::Ca1Report ca1 = qmx::verify_theorem_ca1(cau_n);
            rep["ca1"] = qmx::to_json(ca1);
            if (!ca1.ok()) rc = 1;
        }
        cau_out.emit(rep, "qmx-cauchon.json");
    });

    // ---- center ---------------------------------------------------------
    auto* center_cmd = app.add_subcommand("center", "kernel of the minor torus commutation form");
    int center_n = 2;
    OutputSink center_out;
    center_cmd->add_option("--n", center_n, "matrix size")->required()->check(CLI::Range(1, 3));
    add_output_options(center_cmd, center_out);
    center_cmd->callback([&] {
        qmx::PresPtr p = qmx::build_presentation(center_n);
        qmx::MatrixIndexing ix(center_n);
        qmx::IntMat kernel = qmx::kernel_lattice(*qmx::minor_torus(p, ix));
        qmx::IntMat closed = paired_minor_lattice(ix);
        bool match = qmx::lattice_equal(kernel, closed);
        qmx::Json rep = report_head("center", center_n);
        rep["kernel_basis"] = qmx::to_json(kernel);
        rep["closed_form"] = qmx::to_json(closed);
        rep["rank"] = qmx::lattice_rank(kernel);
        rep["verdict"] = match ? "match" : "mismatch";
        center_out.emit(rep, "qmx-center.json");
        if (!match) rc = 1;
    });

    // ---- solve-unipotent --------------------------------------------------
    auto* solve_cmd =
        app.add_subcommand("solve-unipotent", "classify unipotent endomorphism families");
    int solve_n = 2;
    long long solve_d = 3;
    bool fix_minors = false;
    OutputSink solve_out;
    solve_cmd->add_option("--n", solve_n, "matrix size")->required();
    solve_cmd->add_option("--max-degree", solve_d, "truncation degree")->required();
    solve_cmd->add_flag("--fix-minors", fix_minors,
                        "also require the border minors to be fixed");
    add_output_options(solve_cmd, solve_out);
    solve_cmd->callback([&] {
        std::set<std::string> want{"relations"};
        if (fix_minors) want.insert("fix_special_minors");
        qmx::SolveReport report = qmx::solve_unipotent(solve_n, solve_d, want);
        qmx::Json rep = qmx::to_json(report);
        rep["schema"] = "qmx-report/1";
        rep["command"] = "solve-unipotent";
        solve_out.emit(rep, "qmx-solve-unipotent.json");
    });

    // ---- verify -----------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "run the seeded property suites");
    int verify_n = 2;
    std::string suite = "all";
    std::uint64_t seed = 12345;
    OutputSink verify_out;
    verify_cmd->add_option("--suite", suite, "which suite to run")
        ->check(CLI::IsMember({"pbw", "minors", "torus", "cauchon", "autos", "all"}));
    verify_cmd->add_option("--n", verify_n, "matrix size")->required()->check(CLI::Range(1, 3));
    verify_cmd->add_option("--seed", seed, "seed for all randomized checks");
    add_output_options(verify_cmd, verify_out);
    verify_cmd->callback([&] {
        std::vector<qmx::SuiteResult> results = qmx::verify_suites(suite, verify_n, seed);
        qmx::Json suites = qmx::Json::array();
        int failed = 0;
        for (const auto& s : results) {
            qmx::Json checks = qmx::Json::array();
            for (const auto& c : s.checks) {
                qmx::Json entry{{"label", c.label}, {"pass", c.pass}};
                if (!c.detail.empty()) entry["detail"] = c.detail;
                checks.push_back(std::move(entry));
            }
            suites.push_back(qmx::Json{
                {"suite", s.suite}, {"ok", s.ok()}, {"checks", std::move(checks)}});
            if (!s.ok()) ++failed;
        }
        qmx::Json rep = report_head("verify", verify_n);
        rep["suite"] = suite;
        rep["seed"] = seed;
        rep["suites"] = std::move(suites);
        rep["ok"] = (failed == 0);
        verify_out.emit(rep, "qmx-verify.json");
        rc = failed;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const qmx::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
