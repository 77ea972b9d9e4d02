#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssve/graph.hpp"
#include "ssve/oracle.hpp"
#include "ssve/reductions.hpp"
#include "ssve/relaxation.hpp"
#include "ssve/rounding.hpp"
#include "ssve/verify.hpp"

using nlohmann::json;
using namespace ssve;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUsage = 64;

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

// One-line summary: stdout when the machine output went to a file, stderr otherwise.
std::ostream& say(const std::string& out) { return out.empty() || out == "-" ? std::cerr : std::cout; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string graph_text(const Graph& G) {
    std::ostringstream os;
    write_graph(os, G);
    return os.str();
}

json solve_json(const SdpSolution& s, const RelaxationProblem& P) {
    const auto& r = s.report;
    json j = {{"objective", s.objective},
              {"dual_objective", r.dual_objective},
              {"gap", r.gap},
              {"primal_residual", r.primal_residual},
              {"dual_residual", r.dual_residual},
              {"min_eigenvalue", r.min_eigenvalue},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"degree", P.options.degree},
              {"delta", P.delta},
              {"blocks", P.total_blocks},
              {"l1_constraints", P.l1_constraint_count}};
    const Eigen::MatrixXd& M = s.pd.root();
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
        rows.push_back(row);
    }
    j["moment_matrix"] = rows;
    return j;
}

struct Options {
    std::string graph, hypergraph, out, summary, convention = "size", variant = "a64", kind;
    double delta = -1, theta = -1, tol = -1, C = 2.0;
    int rounds = 4, tcap = 4, trials = 64, d = 4, n = 0, max_iter = 0, expander_degree = 0, seeds = 5;
    uint64_t seed = 0, N = 0;
    bool mirrored = false;
};

double hypergraph_delta(const std::string& path, double given) {
    if (given > 0) return given;
    std::ifstream f(path);
    json j = json::parse(f);
    if (j.contains("delta")) return j.at("delta").get<double>();
    throw std::invalid_argument("--delta is required");
}

PipelineConfig pipeline_config(const Options& o) {
    PipelineConfig c;
    c.rounds = o.rounds;
    c.t_cap = o.tcap;
    c.theta = o.theta;
    c.trials = o.trials;
    c.seed = o.seed;
    if (o.tol > 0) c.tol = o.tol;
    if (o.max_iter > 0) c.max_iter = o.max_iter;
    c.convention = convention_from_string(o.convention);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Small-set vertex expansion: reductions, relaxation, rounding and verification"};
    app.require_subcommand(1);
    Options ro, so, po, oo, go, dgo, vlo, vco, vno;
    // Accepted for interface compatibility; every module here runs single-threaded.
    if (const char* t = std::getenv("SSVE_THREADS")) (void)t;

    auto* reduce = app.add_subcommand("reduce", "Reduce a vertex-expansion instance to a hypergraph");
    reduce->add_option("--graph", ro.graph, "Graph file")->required();
    reduce->add_option("--out", ro.out, "Output hypergraph JSON");

    auto* solve = app.add_subcommand("solve", "Solve the relaxation only");
    solve->add_option("--graph", so.graph, "Graph file (reduced first)");
    solve->add_option("--hypergraph", so.hypergraph, "Hypergraph JSON");
    solve->add_option("--delta", so.delta, "Relative target size");
    solve->add_option("--rounds", so.rounds, "SoS degree (2 or 4)")->default_val(2);
    solve->add_option("--tol", so.tol, "Solver tolerance")->default_val(1e-6);
    solve->add_option("--max-iter", so.max_iter, "Iteration cap")->default_val(10000);
    solve->add_option("--out", so.out, "Output JSON");

    auto* pipeline = app.add_subcommand("pipeline", "Full rounding pipeline");
    pipeline->add_option("--graph", po.graph, "Graph file");
    pipeline->add_option("--hypergraph", po.hypergraph, "Hypergraph JSON (no rollback)");
    pipeline->add_option("--delta", po.delta, "Relative target size");
    pipeline->add_option("--rounds", po.rounds, "SoS degree (2 or 4)")->default_val(4);
    pipeline->add_option("--tcap", po.tcap, "Maximum conditioning set size")->default_val(4);
    pipeline->add_option("--theta", po.theta, "Shift parameter (default delta^12)");
    pipeline->add_option("--trials", po.trials, "Rounding trials")->default_val(64);
    pipeline->add_option("--tol", po.tol, "Solver tolerance (default 1e-4)");
    pipeline->add_option("--max-iter", po.max_iter, "Iteration cap (default 20000)");
    pipeline->add_option("--seed", po.seed, "Seed")->default_val(0);
    pipeline->add_option("--convention", po.convention, "Expansion denominator")->check(CLI::IsMember({"size", "min"}));
    pipeline->add_option("--out", po.out, "Output report JSON");

    auto* oracle = app.add_subcommand("oracle", "Exact optimum by enumeration");
    oracle->add_option("--graph", oo.graph, "Graph file");
    oracle->add_option("--hypergraph", oo.hypergraph, "Hypergraph JSON");
    oracle->add_option("--delta", oo.delta, "Relative target size")->required();
    oracle->add_option("--convention", oo.convention, "Expansion denominator")->check(CLI::IsMember({"size", "min"}));
    oracle->add_option("--out", oo.out, "Output JSON");

    auto* gap = app.add_subcommand("gap", "Integrality-gap instances");
    gap->add_option("kind", go.kind, "single or random")->required()->check(CLI::IsMember({"single", "random"}));
    gap->add_option("--d", go.d, "Hyperedge size")->default_val(4);
    gap->add_option("--n", go.n, "Vertices (random)");
    gap->add_option("--C", go.C, "Edge multiplier (random)")->default_val(2.0);
    gap->add_option("--seed", go.seed, "Seed")->default_val(0);
    gap->add_option("--out", go.out, "Output hypergraph JSON");

    auto* degreduce = app.add_subcommand("degreduce", "Replacement product with a small expander");
    degreduce->add_option("--graph", dgo.graph, "Regular graph file")->required();
    degreduce->add_option("--expander-degree", dgo.expander_degree, "Cloud expander degree (default d - 1)");
    degreduce->add_option("--out", dgo.out, "Output graph file");

    auto* vlemma = app.add_subcommand("verify-lemma", "Rounding lemma Monte Carlo sweep");
    vlemma->add_option("--N", vlo.N, "Samples per grid point")->default_val(200000);
    vlemma->add_option("--seed", vlo.seed, "Seed")->default_val(0);
    vlemma->add_option("--variant", vlo.variant, "Constant A")->check(CLI::IsMember({"a64", "a16"}));
    vlemma->add_flag("--mirrored", vlo.mirrored, "Biases above 1/2");
    vlemma->add_option("--out", vlo.out, "Output CSV");
    vlemma->add_option("--summary", vlo.summary, "Output summary JSON");

    auto* vcdf = app.add_subcommand("verify-cdf", "Gaussian CDF and maxima facts");
    vcdf->add_option("--N", vco.N, "Monte Carlo samples")->default_val(100000);
    vcdf->add_option("--seed", vco.seed, "Seed")->default_val(0);
    vcdf->add_option("--out", vco.out, "Output CSV");
    vcdf->add_option("--summary", vco.summary, "Output summary JSON");

    auto* vconc = app.add_subcommand("verify-conc", "Size concentration over pipeline seeds");
    vconc->add_option("--graph", vno.graph, "Graph file")->required();
    vconc->add_option("--delta", vno.delta, "Relative target size")->required();
    vconc->add_option("--seeds", vno.seeds, "Pipeline seeds 0..k-1")->default_val(5);
    vconc->add_option("--trials", vno.trials, "Rounding trials per seed")->default_val(200);
    vconc->add_option("--tcap", vno.tcap, "Maximum conditioning set size")->default_val(4);
    vconc->add_option("--tol", vno.tol, "Solver tolerance (default 1e-4)");
    vconc->add_option("--out", vno.out, "Output JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Error& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitUsage;
    }

    try {
        if (*reduce) {
            Graph G = read_graph_file(ro.graph);
            Reduction R = ssve_to_hsse(G);
            write_out(ro.out, hypergraph_to_json(R.H) + "\n");
            say(ro.out) << "reduced n=" << G.n() << " m=" << G.m() << " to |V(H)|=" << R.H.n() << " |E(H)|=" << R.H.m()
                      << "\n";
        } else if (*solve) {
            Hypergraph H;
            double delta = so.delta;
            if (!so.hypergraph.empty()) {
                H = read_hypergraph_file(so.hypergraph);
                delta = hypergraph_delta(so.hypergraph, so.delta);
            } else if (!so.graph.empty()) {
                H = ssve_to_hsse(read_graph_file(so.graph)).H;
                if (delta <= 0) throw std::invalid_argument("--delta is required");
            } else {
                throw CLI::RequiredError("--graph or --hypergraph");
            }
            RelaxationOptions opt;
            opt.degree = so.rounds;
            RelaxationProblem P = build_relaxation(H, delta, opt);
            SdpSolution s = solve_sdp(P, so.tol, so.max_iter);
            write_out(so.out, dump(solve_json(s, P)));
            say(so.out) << "objective " << s.objective << " iterations " << s.report.iterations << "\n";
        } else if (*pipeline) {
            if (po.delta <= 0 && po.hypergraph.empty()) throw std::invalid_argument("--delta is required");
            PipelineConfig c = pipeline_config(po);
            RunReport r;
            if (!po.hypergraph.empty())
                r = hypergraph_pipeline(read_hypergraph_file(po.hypergraph), hypergraph_delta(po.hypergraph, po.delta), c);
            else if (!po.graph.empty())
                r = full_pipeline(read_graph_file(po.graph), po.delta, c);
            else
                throw CLI::RequiredError("--graph or --hypergraph");
            write_out(po.out, r.to_json());
            say(po.out) << "sdp " << r.sdp.objective << " chosen trial " << r.chosen_trial << " phi_E "
                      << r.chosen_expansion;
            if (r.has_rollback) say(po.out) << " |S'| " << r.rollback.size << " phi_V " << r.phi_v;
            say(po.out) << "\n";
        } else if (*oracle) {
            json j;
            if (!oo.graph.empty()) {
                Convention conv = convention_from_string(oo.convention);
                auto [value, S] = exact_ssve(read_graph_file(oo.graph), oo.delta, conv);
                j = {{"value", value}, {"set", S.members()}, {"convention", to_string(conv)}};
            } else if (!oo.hypergraph.empty()) {
                auto [value, S] = exact_hsse(read_hypergraph_file(oo.hypergraph), oo.delta);
                j = {{"value", value}, {"set", S.members()}, {"convention", "weight"}};
            } else {
                throw CLI::RequiredError("--graph or --hypergraph");
            }
            write_out(oo.out, dump(j));
            say(oo.out) << "value " << j["value"].get<double>() << "\n";
        } else if (*gap) {
            json j;
            if (go.kind == "single") {
                GapInstance g = gap_single_edge(go.d);
                j = json::parse(hypergraph_to_json(g.H));
                j["delta"] = g.delta;
                json V = json::array();
                for (int i = 0; i < g.vectors.V.rows(); ++i) {
                    json row = json::array();
                    for (int k = 0; k < g.vectors.V.cols(); ++k) row.push_back(g.vectors.V(i, k));
                    V.push_back(row);
                }
                j["vectors"] = V;
                j["vector_objective"] = vector_objective(g.H, g.delta, g.vectors);
            } else {
                if (go.n <= 0) throw std::invalid_argument("--n is required");
                Hypergraph H = random_gap_hypergraph(go.d, go.n, go.C, go.seed);
                j = json::parse(hypergraph_to_json(H));
                j["delta"] = 1.0 / go.d;
            }
            write_out(go.out, dump(j));
            say(go.out) << "gap " << go.kind << " d=" << go.d << "\n";
        } else if (*degreduce) {
            Graph G = read_graph_file(dgo.graph);
            int d = G.max_degree();
            int g = dgo.expander_degree > 0 ? dgo.expander_degree : d - 1;
            Graph X = regular_expander(d, g);
            Graph out = replacement_product(G, X);
            write_out(dgo.out, graph_text(out));
            say(dgo.out) << "replacement product n=" << out.n() << " max degree " << out.max_degree() << "\n";
        } else if (*vlemma) {
            SweepConfig c;
            c.N = vlo.N;
            c.seed = vlo.seed;
            c.variant = vlo.variant == "a16" ? AVariant::a16 : AVariant::a64;
            c.mirrored = vlo.mirrored;
            auto rows = rounding_lemma_sweep(c);
            write_out(vlo.out, sweep_csv(rows));
            int pass = 0;
            double worst = 0;
            uint64_t viol = 0;
            for (const auto& r : rows) {
                pass += r.pass;
                worst = std::max(worst, r.ratio);
                viol += r.sidedness_violations;
            }
            json s = {{"points", rows.size()}, {"passed", pass}, {"max_ratio", worst}, {"K", c.K},
                      {"sidedness_violations", viol}, {"variant", vlo.variant}, {"mirrored", vlo.mirrored}};
            if (!vlo.summary.empty()) write_out(vlo.summary, dump(s));
            say(vlo.out) << pass << "/" << rows.size() << " grid points pass, max ratio " << worst << "\n";
            if (pass != static_cast<int>(rows.size())) return kExitInternal;
        } else if (*vcdf) {
            auto rows = cdf_fact_check(vco.N, vco.seed);
            write_out(vco.out, facts_csv(rows));
            int pass = 0;
            json failing = json::array();
            for (const auto& r : rows) {
                pass += r.pass;
                if (!r.pass) failing.push_back({{"fact", r.fact}, {"point", r.worst_point}});
            }
            json s = {{"facts", rows.size()}, {"passed", pass}, {"failing", failing}};
            if (!vco.summary.empty()) write_out(vco.summary, dump(s));
            say(vco.out) << pass << "/" << rows.size() << " facts pass\n";
            if (pass != static_cast<int>(rows.size())) return kExitInternal;
        } else if (*vconc) {
            Graph G = read_graph_file(vno.graph);
            std::vector<RunReport> reports;
            json runs = json::array();
            for (int s = 0; s < vno.seeds; ++s) {
                Options oo = vno;
                oo.seed = static_cast<uint64_t>(s);
                reports.push_back(full_pipeline(G, vno.delta, pipeline_config(oo)));
                runs.push_back(json::parse(reports.back().to_json()));
            }
            ConcentrationStats st = concentration_check(reports);
            json j = {{"trials", st.trials},
                      {"in_window", st.in_window},
                      {"in_tight_window", st.in_tight_window},
                      {"fraction", st.fraction},
                      {"tight_fraction", st.tight_fraction},
                      {"threshold", st.threshold},
                      {"pass", st.pass},
                      {"runs", runs}};
            write_out(vno.out, dump(j));
            say(vno.out) << "window fraction " << st.fraction << (st.pass ? " pass" : " fail") << "\n";
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    } catch (const NoConcentratedTrial& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        if (msg.find("degenerate") != std::string::npos || msg.find("infeasible") != std::string::npos ||
            msg.rfind("rollback", 0) == 0)
            return kExitInfeasible;
        return kExitInternal;
    }
    return kExitOk;
}
