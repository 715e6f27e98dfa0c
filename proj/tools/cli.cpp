/*
 * Copyright 2026 The nnbisim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "nnbisim/approx.hpp"
#include "nnbisim/bisim.hpp"
#include "nnbisim/error.hpp"
#include "nnbisim/generate.hpp"
#include "nnbisim/io.hpp"
#include "nnbisim/minimize.hpp"

namespace nnbisim::cli {

namespace {

// Wall-clock per phase. Reported on the human channel only so that the JSON
// report stays byte-stable across runs.
class Phases {
public:
    template <typename F>
    decltype(auto) time(const char* name, F&& f) {
        const auto start = std::chrono::steady_clock::now();
        struct Record {
            Phases& self;
            const char* name;
            std::chrono::steady_clock::time_point start;
            ~Record() {
                const std::chrono::duration<double, std::milli> d =
                    std::chrono::steady_clock::now() - start;
                self.entries_.emplace_back(name, d.count());
            }
        } record{*this, name, start};
        return f();
    }

    std::string summary() const {
        std::ostringstream ss;
        ss.precision(3);
        ss << std::fixed;
        for (std::size_t x = 0; x < entries_.size(); ++x) {
            ss << (x ? ", " : "") << entries_[x].first << " " << entries_[x].second << " ms";
        }
        return ss.str();
    }

private:
    std::vector<std::pair<std::string, double>> entries_;
};

Json sizes_json(const Network& net) {
    return Json{{"layer_sizes", net.layer_sizes()},
                {"nodes", net.node_count()},
                {"edges", net.edge_count()}};
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string describe(const Violation& v) {
    std::ostringstream ss;
    ss << condition_name(v.condition) << " mismatch in layer " << v.layer << ", block "
       << v.target_block;
    if (v.prev_block) ss << " w.r.t. previous block " << *v.prev_block;
    ss << ": nodes " << v.node_a << " and " << v.node_b << ", gap " << v.gap;
    return ss.str();
}

struct Context {
    std::ostream& out;
    std::ostream& err;
    Phases phases;
    Json report;

    int finish(int status, const std::string& human) {
        report["exit_status"] = status;
        out << report.dump(2) << "\n";
        err << report["command"].get<std::string>() << ": " << human;
        const std::string t = phases.summary();
        if (!t.empty()) err << " [" << t << "]";
        err << "\n";
        return status;
    }
};

Network read_model(Context& c, const std::string& path) {
    return c.phases.time("load", [&] { return load_model(read_text_file(path)); });
}

NetPartition read_partition(Context& c, const std::string& path, const Network& net) {
    return c.phases.time("load", [&] { return load_partition(read_text_file(path), net.layer_sizes()); });
}

// --- check -------------------------------------------------------------------

struct CheckArgs {
    std::string model, partition;
    std::optional<double> delta;
};

int cmd_check(Context& c, const CheckArgs& a) {
    c.report["inputs"] = Json{{"model", a.model},
                              {"partition", a.partition},
                              {"delta", a.delta ? Json(*a.delta) : Json(nullptr)}};
    const Network net = read_model(c, a.model);
    const NetPartition p = read_partition(c, a.partition, net);
    c.report["sizes"] = sizes_json(net);
    c.report["blocks"] = p.block_count();

    const DeltaReport d = c.phases.time("check", [&] {
        return check_delta_bisimulation(net, p, a.delta.value_or(0.0));
    });
    Json result;
    std::optional<Violation> witness = d.witness;
    bool ok = d.ok;
    if (!a.delta) {
        const BisimReport r = c.phases.time("check", [&] { return check_bisimulation(net, p); });
        ok = r.ok;
        witness = r.witness;
    }
    result["mode"] = a.delta ? "delta" : "exact";
    result["ok"] = ok;
    result["witness"] = witness ? to_json(*witness) : Json(nullptr);
    result["max_bias_gap"] = number_or_null(d.max_bias_gap);
    result["max_presum_gap"] = number_or_null(d.max_presum_gap);
    c.report["result"] = std::move(result);
    if (ok) return c.finish(kOk, a.delta ? "delta-bisimulation" : "bisimulation");
    return c.finish(kCheckFailed, "not a " + std::string(a.delta ? "delta-" : "") +
                                      "bisimulation: " + describe(*witness));
}

// --- minimize ----------------------------------------------------------------

struct MinimizeArgs {
    std::string model;
    std::string preserve_io = "on";
    std::string out, partition_out;
};

int cmd_minimize(Context& c, const MinimizeArgs& a) {
    c.report["inputs"] = Json{{"model", a.model},
                              {"preserve_io", a.preserve_io},
                              {"out", a.out.empty() ? Json(nullptr) : Json(a.out)},
                              {"partition_out", a.partition_out.empty() ? Json(nullptr) : Json(a.partition_out)}};
    const Network net = read_model(c, a.model);
    MinimizeOptions options;
    options.preserve_io = a.preserve_io == "on";
    const MinimizeResult r = c.phases.time("minimize", [&] { return minimize(net, options); });

    if (!a.out.empty()) c.phases.time("write", [&] { write_text_file(a.out, save_model(r.reduced)); });
    if (!a.partition_out.empty()) {
        c.phases.time("write", [&] { write_text_file(a.partition_out, save_partition(r.partition)); });
    }
    Json result;
    result["before"] = sizes_json(net);
    result["after"] = sizes_json(r.reduced);
    result["nodes_removed"] = net.node_count() - r.reduced.node_count();
    result["edges_removed"] = net.edge_count() - r.reduced.edge_count();
    result["refinement_steps"] = r.trace.steps.size();
    result["presum_splits"] = r.trace.presum_splits();
    if (a.partition_out.empty()) result["partition"] = to_json(r.partition);
    c.report["result"] = std::move(result);
    std::ostringstream human;
    human << net.node_count() << " -> " << r.reduced.node_count() << " nodes, " << net.edge_count()
          << " -> " << r.reduced.edge_count() << " edges";
    return c.finish(kOk, human.str());
}

// --- quotient ----------------------------------------------------------------

struct QuotientArgs {
    std::string model, partition;
    double delta = 0.0;
    std::string policy = "min_index";
    std::string out;
};

int cmd_quotient(Context& c, const QuotientArgs& a) {
    c.report["inputs"] = Json{{"model", a.model},
                              {"partition", a.partition},
                              {"delta", a.delta},
                              {"policy", a.policy},
                              {"out", a.out.empty() ? Json(nullptr) : Json(a.out)}};
    const RepresentativePolicy policy = RepresentativePolicy::from_name(a.policy);
    const Network net = read_model(c, a.model);
    const NetPartition p = read_partition(c, a.partition, net);
    const Network q = c.phases.time("quotient", [&] { return quotient_delta(net, p, a.delta, policy); });
    const std::string text = save_model(q);
    if (!a.out.empty()) c.phases.time("write", [&] { write_text_file(a.out, text); });

    Json result;
    result["before"] = sizes_json(net);
    result["after"] = sizes_json(q);
    if (a.out.empty()) result["model"] = Json::parse(text);
    c.report["result"] = std::move(result);
    return c.finish(kOk, "quotient with " + std::to_string(q.node_count()) + " nodes");
}

// --- bound -------------------------------------------------------------------

struct BoundArgs {
    std::string model, partition;
    double delta = 0.0, eps0 = 0.0, vinf = 1.0;
};

int cmd_bound(Context& c, const BoundArgs& a) {
    c.report["inputs"] = Json{{"model", a.model},
                              {"partition", a.partition},
                              {"delta", a.delta},
                              {"eps0", a.eps0},
                              {"vinf", a.vinf}};
    const Network net = read_model(c, a.model);
    const NetPartition p = read_partition(c, a.partition, net);
    const ErrorBound b =
        c.phases.time("bound", [&] { return global_error_bound(net, p, a.delta, a.eps0, a.vinf); });
    c.report["result"] = to_json(b);
    std::ostringstream human;
    human.precision(17);
    human << "output deviation bound " << b.eps_final;
    return c.finish(kOk, human.str());
}

// --- compare -----------------------------------------------------------------

struct CompareArgs {
    std::string model_a, model_b, map;
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
    double vinf = 1.0;
};

int cmd_compare(Context& c, const CompareArgs& a) {
    c.report["inputs"] = Json{{"model_a", a.model_a},
                              {"model_b", a.model_b},
                              {"samples", a.samples},
                              {"seed", a.seed},
                              {"vinf", a.vinf},
                              {"map", a.map.empty() ? Json(nullptr) : Json(a.map)}};
    if (!(a.vinf >= 0.0) || !std::isfinite(a.vinf)) throw ValidationError("--vinf must be finite and non-negative");
    const Network na = read_model(c, a.model_a);
    const Network nb = read_model(c, a.model_b);
    const NetPartition p = a.map.empty() ? identity_partition(na) : read_partition(c, a.map, na);
    std::vector<std::size_t> expected;
    for (const auto& lp : p.layers()) expected.push_back(lp.block_count());
    if (nb.layer_sizes() != expected) {
        throw ValidationError("model_b's layer sizes do not match the blocks of the mapping");
    }

    const std::size_t k = na.depth();
    double worst = 0.0;
    std::optional<std::size_t> worst_sample;
    c.phases.time("compare", [&] {
        Rng rng(a.seed);
        for (std::size_t n = 0; n < a.samples; ++n) {
            Valuation u{0, std::vector<double>(p[0].block_count())};
            for (double& x : u.values) x = rng.uniform(-a.vinf, a.vinf);
            const Valuation ya = eval_network(na, concretize_valuation(u, p[0]));
            const Valuation yb = eval_network(nb, u);
            for (std::size_t j = 0; j < p[k].block_count(); ++j) {
                for (std::size_t s : p[k].block(j)) {
                    const double d = std::fabs(ya.values[s] - yb.values[j]);
                    if (!worst_sample || d > worst) {
                        worst = d;
                        worst_sample = n;
                    }
                }
            }
        }
    });
    Json result;
    result["samples"] = a.samples;
    result["distribution"] = "uniform box [-vinf, vinf] over input blocks";
    result["max_deviation"] = number_or_null(worst);
    result["worst_sample"] = worst_sample ? Json(*worst_sample) : Json(nullptr);
    c.report["result"] = std::move(result);
    std::ostringstream human;
    human.precision(17);
    human << a.samples << " samples, max block-wise deviation " << worst;
    return c.finish(kOk, human.str());
}

// --- eval --------------------------------------------------------------------

struct EvalArgs {
    std::string model;
    std::vector<double> input;
};

int cmd_eval(Context& c, const EvalArgs& a) {
    c.report["inputs"] = Json{{"model", a.model}, {"input", a.input}};
    const Network net = read_model(c, a.model);
    if (a.input.size() != net.layer_size(0)) {
        throw ValidationError("--input has " + std::to_string(a.input.size()) + " values, layer 0 has " +
                              std::to_string(net.layer_size(0)) + " nodes");
    }
    const Valuation y = c.phases.time("eval", [&] { return eval_network(net, Valuation{0, a.input}); });
    Json out = Json::array();
    for (double x : y.values) out.push_back(number_or_null(x));
    c.report["result"] = Json{{"output", std::move(out)}};
    return c.finish(kOk, "evaluated " + std::to_string(y.values.size()) + " outputs");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"NN-bisimulation checking, minimization and approximate reduction"};
    app.require_subcommand(1);

    CheckArgs check;
    auto* sc = app.add_subcommand("check", "Check whether a partition is an (approximate) bisimulation");
    sc->add_option("model", check.model, "Model document")->required();
    sc->add_option("partition", check.partition, "Partition document")->required();
    sc->add_option("--delta", check.delta, "Run the delta-check with this tolerance")
        ->check(CLI::NonNegativeNumber);

    MinimizeArgs mini;
    auto* sm = app.add_subcommand("minimize", "Compute the coarsest bisimulation and the reduced model");
    sm->add_option("model", mini.model, "Model document")->required();
    sm->add_option("--preserve-io", mini.preserve_io, "Keep input and output nodes unmerged")
        ->check(CLI::IsMember({"on", "off"}));
    sm->add_option("--out", mini.out, "Where to write the reduced model");
    sm->add_option("--partition-out", mini.partition_out, "Where to write the partition");

    QuotientArgs quot;
    auto* sq = app.add_subcommand("quotient", "Build the (delta-)quotient of a model");
    sq->add_option("model", quot.model, "Model document")->required();
    sq->add_option("partition", quot.partition, "Partition document")->required();
    sq->add_option("--delta", quot.delta, "Tolerance (0 = exact)")->check(CLI::NonNegativeNumber);
    sq->add_option("--policy", quot.policy, "Representative policy")
        ->check(CLI::IsMember({"min_index", "max_index", "per_value_min", "per_value_max"}));
    sq->add_option("--out", quot.out, "Where to write the quotient model");

    BoundArgs bound;
    auto* sb = app.add_subcommand("bound", "Output deviation bound for a delta-bisimulation");
    sb->add_option("model", bound.model, "Model document")->required();
    sb->add_option("partition", bound.partition, "Partition document")->required();
    sb->add_option("--delta", bound.delta, "Tolerance")->check(CLI::NonNegativeNumber);
    sb->add_option("--eps0", bound.eps0, "Input abstraction error")->check(CLI::NonNegativeNumber);
    sb->add_option("--vinf", bound.vinf, "Bound on the input infinity norm")->check(CLI::NonNegativeNumber);

    CompareArgs cmp;
    auto* sp = app.add_subcommand("compare", "Sample inputs and measure the output deviation of two models");
    sp->add_option("model_a", cmp.model_a, "Original model")->required();
    sp->add_option("model_b", cmp.model_b, "Reduced model")->required();
    sp->add_option("--samples", cmp.samples, "Number of sampled inputs");
    sp->add_option("--seed", cmp.seed, "Sampling seed");
    sp->add_option("--vinf", cmp.vinf, "Inputs are drawn uniformly from [-vinf, vinf]")
        ->check(CLI::NonNegativeNumber);
    sp->add_option("--map", cmp.map, "Partition of model_a whose blocks are model_b's nodes");

    EvalArgs ev;
    auto* se = app.add_subcommand("eval", "Evaluate a model on one input");
    se->add_option("model", ev.model, "Model document")->required();
    se->add_option("--input", ev.input, "Input values, comma separated")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsage;
    }

    Context c{out, err, {}, Json::object()};
    const std::string name = app.get_subcommands().front()->get_name();
    c.report["command"] = name;
    auto fail = [&](int status, const std::string& kind, const std::string& message,
                    const std::optional<Violation>& witness = std::nullopt) {
        c.report["error"] = Json{{"kind", kind},
                                 {"message", message},
                                 {"witness", witness ? to_json(*witness) : Json(nullptr)}};
        std::string human = kind + ": " + message;
        if (witness) human += " (" + describe(*witness) + ")";
        return c.finish(status, human);
    };
    try {
        if (name == "check") return cmd_check(c, check);
        if (name == "minimize") return cmd_minimize(c, mini);
        if (name == "quotient") return cmd_quotient(c, quot);
        if (name == "bound") return cmd_bound(c, bound);
        if (name == "compare") return cmd_compare(c, cmp);
        return cmd_eval(c, ev);
    } catch (const PreconditionError& e) {
        return fail(kCheckFailed, "precondition", e.what(), e.witness());
    } catch (const IoError& e) {
        return fail(kIo, "io", e.what());
    } catch (const ParseError& e) {
        return fail(kIo, "parse", e.what());
    } catch (const ValidationError& e) {
        return fail(kCheckFailed, "validation", e.what());
    } catch (const ContractError& e) {
        return fail(kCheckFailed, "validation", e.what());
    } catch (const IndexError& e) {
        return fail(kCheckFailed, "validation", e.what());
    }
}

}  // namespace nnbisim::cli
