#include "commands.hpp"

#include <qmix/algorithms.hpp>
#include <qmix/chain_generators.hpp>
#include <qmix/classical_times.hpp>
#include <qmix/io.hpp>
#include <qmix/qlsamp.hpp>
#include <qmix/random_graphs.hpp>
#include <qmix/rng.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace qmix::cli {
namespace {

using nlohmann::ordered_json;

struct LoadedChain {
  StochasticMatrix p;
  std::string id;
};

// A file path, or a generator "complete:N", "cycle:N", "random:N".
LoadedChain load_chain(const RunConfig& cfg) {
  const std::string spec = cfg.text("chain");
  const auto colon = spec.find(':');
  if (colon != std::string::npos && !std::filesystem::exists(spec)) {
    const std::string kind = spec.substr(0, colon);
    long long n = 0;
    try {
      n = std::stoll(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw InputError("chain generator size is not an integer: " + spec);
    }
    if (n < 2) throw InputError("chain generator needs at least two states");
    const auto ni = static_cast<Eigen::Index>(n);
    if (kind == "complete") return {complete_graph_walk(ni), spec};
    if (kind == "cycle") return {cycle_walk(ni), spec};
    if (kind == "random") {
      Rng rng(derive_seed(cfg.master_seed, {0xc4a1ULL}));
      return {random_reversible_chain(ni, rng), spec};
    }
    throw InputError("unknown chain generator '" + kind + "' (complete, cycle, random)");
  }
  if (!std::filesystem::exists(spec)) throw InputError("chain file not found: " + spec);
  return {io::read_chain(spec), std::filesystem::path(spec).stem().string()};
}

WalkOptions walk_options(const RunConfig& cfg) {
  WalkOptions o;
  const std::string rep = cfg.text_or("representation", "effective");
  if (rep == "full")
    o.representation = Representation::full;
  else if (rep != "effective")
    throw InputError("representation must be effective or full");
  const std::string sz = cfg.text_or("sizing", "hamiltonian");
  if (sz == "chain")
    o.sizing = PointerSizing::chain_gap;
  else if (sz != "hamiltonian")
    throw InputError("sizing must be hamiltonian or chain");
  return o;
}

std::string fmt(double v) { return io::format_double(v); }

io::Cell optional_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::string();
}

ordered_json optional_json(const std::optional<double>& v) {
  if (v) return number(*v);
  return nullptr;
}

ordered_json stage_json(const FilterStage& st) {
  ordered_json j;
  j["s"] = number(st.s);
  j["chain_gap"] = number(st.chain_gap);
  j["hamiltonian_gap"] = number(st.hamiltonian_gap);
  j["pointer_qubits"] = st.config.l;
  j["blocks"] = st.config.blocks;
  j["tau"] = number(st.config.tau);
  j["success_prob"] = number(st.success_prob);
  j["perp_weight"] = number(st.perp_weight);
  j["top_overlap_sq"] = number(st.top_overlap_sq);
  return j;
}

double rate(int hits, int total) { return total ? static_cast<double>(hits) / total : 0.0; }

}  // namespace

int thread_count(const RunConfig& cfg) {
  const long long t = cfg.integer_or("threads", static_cast<long long>(std::max(1u, std::thread::hardware_concurrency())));
  if (t < 1) throw InputError("threads must be >= 1");
  return static_cast<int>(t);
}

void run_chain_info(const RunConfig& cfg, Artifacts& art) {
  const LoadedChain c = load_chain(cfg);
  const ErgodicityReport rep = check_ergodic_reversible(c.p);
  ordered_json out;
  out["chain_id"] = c.id;
  out["n"] = c.p.n();
  out["strongly_connected"] = rep.strongly_connected;
  out["aperiodic"] = rep.aperiodic;
  out["ergodic"] = rep.ergodic;
  out["reversible"] = rep.reversible;
  out["detailed_balance_residual"] = number(rep.detailed_balance_residual);
  out["stationarity_residual"] = number(rep.stationarity_residual);
  art.check(rep.ergodic, "chain is ergodic");
  art.check(rep.reversible, "chain is reversible");
  if (rep.ergodic && rep.reversible) {
    const StationaryDistribution pi{*rep.pi, 0.0};
    {
      std::ofstream f = art.file("stationary.csv");
      io::write_index_value_csv(f, pi.pi);
    }
    const Discriminant d = discriminant(c.p);
    {
      auto csv = art.csv("discriminant_spectrum.csv", {"index", "value"});
      for (Eigen::Index k = 0; k < d.n(); ++k) csv.row({static_cast<long long>(k), d.spectrum.values(k)});
    }
    const double eps = cfg.epsilon_or(0.25);
    const ClassicalMixingReport mix = classical_mixing_time(c.p, pi, eps);
    const long long horizon = std::clamp<long long>(2 * mix.t_mix_empirical, 10, 2000);
    std::vector<long long> times;
    for (long long t = 0; t <= horizon; ++t) times.push_back(t);
    const std::vector<double> tv = tv_trace(c.p, pi.pi, times);
    {
      auto csv = art.csv("tv_trace.csv", {"t", "tv_distance"});
      for (std::size_t k = 0; k < times.size(); ++k) csv.row({times[k], tv[k]});
    }
    out["pi_min"] = number(pi.pi_min());
    out["spectral_gap"] = number(d.spectral_gap());
    out["epsilon"] = number(eps);
    out["t_mix_empirical"] = mix.t_mix_empirical;
    out["t_mix_bound"] = number(mix.t_mix_bound);
    art.check(static_cast<double>(mix.t_mix_empirical) <= mix.t_mix_bound + 1.0,
              "empirical mixing time within the spectral-gap bound (" + std::to_string(mix.t_mix_empirical) +
                  " <= " + fmt(mix.t_mix_bound) + ")");
    art.note("spectral gap " + fmt(d.spectral_gap()) + ", pi_min " + fmt(pi.pi_min()));
  }
  art.json("chain_info.json", out);
  art.results() = out;
}

void run_hitting(const RunConfig& cfg, Artifacts& art) {
  const LoadedChain c = load_chain(cfg);
  const MarkedSet m = io::parse_marked(cfg.text("marked"), c.p.n());
  const StationaryDistribution pi = with_marked(stationary_distribution(c.p), m);
  const std::vector<double> grid = parse_real_grid(cfg.text_or("s", "0:0.95:0.05"));
  for (double s : grid)
    if (!(s >= 0.0 && s < 1.0)) throw InputError("s values must lie in [0,1)");
  const ExtendedHittingTimeReport ext = extended_hitting_time(c.p, pi, m, grid);
  {
    auto csv = art.csv("hitting.csv", {"s", "HT_s", "HT_plus_estimate"});
    for (std::size_t k = 0; k < ext.per_s_values.size(); ++k)
      csv.row({ext.per_s_values[k].first, ext.per_s_values[k].second, ext.per_s_ht_plus[k]});
  }
  const HittingTimeReport spectral = hitting_time_spectral(c.p, pi, m);
  const long long trials = cfg.integer_or("trials", 100000);
  if (trials < 0) throw InputError("trials must be nonnegative");
  ordered_json out;
  out["chain_id"] = c.id;
  out["n"] = c.p.n();
  out["p_marked"] = number(pi.p_marked);
  out["ht_spectral"] = number(spectral.ht);
  out["degenerate_spectrum"] = spectral.degenerate_spectrum;
  out["ht_plus"] = number(ext.ht_plus);
  out["invariance_residual"] = number(ext.invariance_residual);
  if (trials > 0) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, {0x417ULL});
    art.seed("montecarlo", seed);
    const HittingTimeReport mc = hitting_time_montecarlo(c.p, m, static_cast<std::uint64_t>(trials), seed);
    out["ht_montecarlo"] = number(mc.ht);
    out["ht_montecarlo_stderr"] = number(mc.stderr_);
    out["montecarlo_z"] = number(mc.stderr_ > 0 ? (mc.ht - spectral.ht) / mc.stderr_ : 0.0);
    out["raw_mean_including_marked_starts"] = number(mc.raw_mean);
    art.note("Monte Carlo " + fmt(mc.ht) + " +- " + fmt(mc.stderr_) + " vs spectral " + fmt(spectral.ht));
  }
  art.check(ext.consistent, "HT(s) rescaled to HT+ is constant over s (residual " + fmt(ext.invariance_residual) + ")");
  art.json("hitting.json", out);
  art.results() = out;
}

void run_search(const RunConfig& cfg, Artifacts& art) {
  const LoadedChain c = load_chain(cfg);
  const MarkedSet m = io::parse_marked(cfg.text("marked"), c.p.n());
  const double eps = cfg.epsilon_or(0.05);
  const StationaryDistribution pi = with_marked(stationary_distribution(c.p), m);
  art.seed("sampling", cfg.master_seed);
  const SearchOutcome r = spatial_search(c.p, pi, m, eps, cfg.master_seed, walk_options(cfg));
  {
    auto csv = art.csv("node_probs.csv", {"node", "prob"});
    for (Eigen::Index x = 0; x < r.node_probs.size(); ++x) csv.row({static_cast<long long>(x), r.node_probs(x)});
  }
  ordered_json out;
  out["chain_id"] = c.id;
  out["n"] = c.p.n();
  out["s_star"] = number(r.s_star);
  out["success_prob"] = number(r.success_prob);
  out["fidelity"] = number(r.stage.top_overlap_sq);
  out["total_time"] = number(r.total_time);
  out["seed"] = cfg.master_seed;
  out["sampled_node"] = r.sampled_node;
  out["is_marked"] = r.is_marked;
  out["p_marked"] = number(r.p_marked);
  out["marked_weight"] = number(r.marked_weight);
  out["stage"] = stage_json(r.stage);
  art.json("search.json", out);
  art.results() = out;
  art.check(r.success_prob >= 0.25 - eps, "marked-node probability " + fmt(r.success_prob) + " >= 1/4 - epsilon");
}

void run_qssamp(const RunConfig& cfg, Artifacts& art) {
  const LoadedChain c = load_chain(cfg);
  const long long j = cfg.integer_or("j", 0);
  if (j < 0 || j >= c.p.n()) throw InputError("j must index a state of the chain");
  const double eps = cfg.epsilon_or(0.01);
  const QSSampOutcome r = qssamp_prepare(c.p, static_cast<Eigen::Index>(j), eps, std::nullopt, walk_options(cfg));
  const Vector pi = stationary_distribution(c.p);
  {
    auto csv = art.csv("state.csv", {"node", "prob"});
    for (Eigen::Index x = 0; x < r.state.size(); ++x) csv.row({static_cast<long long>(x), r.state(x) * r.state(x)});
  }
  {
    std::ofstream f = art.file("stationary.csv");
    io::write_index_value_csv(f, pi);
  }
  ordered_json out;
  out["chain_id"] = c.id;
  out["n"] = c.p.n();
  out["s_star"] = number(r.s_star);
  out["success_prob"] = number(r.stage1.success_prob * r.stage2.success_prob);
  out["fidelity"] = number(r.fidelity_to_pi);
  out["total_time"] = number(r.total_time);
  out["seed"] = cfg.master_seed;
  out["j"] = j;
  out["distance_to_pi"] = number(r.distance_to_pi);
  out["blocks_per_stage"] = r.blocks_per_stage;
  out["stage1"] = stage_json(r.stage1);
  out["stage2"] = stage_json(r.stage2);
  art.json("qssamp.json", out);
  art.results() = out;
  art.check(r.distance_to_pi <= 4 * eps, "distance to sqrt(pi) " + fmt(r.distance_to_pi) + " <= 4 epsilon");
  art.check(r.stage1.success_prob >= 0.45 && r.stage2.success_prob >= 0.45,
            "stage post-selection probabilities " + fmt(r.stage1.success_prob) + ", " + fmt(r.stage2.success_prob) +
                " >= 0.45");
}

void run_qlsamp(const RunConfig& cfg, Artifacts& art) {
  SpectralDecomposition spec;
  ordered_json out;
  if (cfg.has("chain")) {
    const LoadedChain c = load_chain(cfg);
    spec = discriminant(c.p).spectrum;
    out["source"] = "discriminant";
    out["chain_id"] = c.id;
  } else {
    const long long n = cfg.integer("n");
    const double p = cfg.real_or("p", 0.5);
    const std::uint64_t seed = cell_seed(cfg.master_seed, static_cast<Eigen::Index>(n), 0);
    art.seed("graph", seed);
    spec = sample_gnp(static_cast<Eigen::Index>(n), p, seed).spectrum;
    out["source"] = "gnp";
    out["p"] = number(p);
    out["graph_seed"] = seed;
  }
  const Eigen::Index n = spec.size();
  const long long j = cfg.integer_or("j", 0);
  if (j < 0 || j >= n) throw InputError("j must index a node");
  const double eps = cfg.epsilon_or(0.1);
  const double t_max = cfg.real_or("t-max", 1e4);
  const long long points = cfg.integer_or("grid-points", 400);
  if (!(t_max > 0.01) || points < 2) throw InputError("need t-max > 0.01 and grid-points >= 2");
  const Vector psi = Vector::Unit(n, static_cast<Eigen::Index>(j));
  const std::vector<double> grid = geometric_grid(0.01, t_max, static_cast<int>(points));
  const MixingTrace tr = mixing_trace(spec, psi, eps, grid);
  const Vector lim = limiting_distribution(spec, psi).probs;
  {
    auto csv = art.csv("trace.csv", {"t", "D_P"});
    for (std::size_t k = 0; k < tr.times.size(); ++k) csv.row({tr.times[k], tr.distances[k]});
  }
  {
    auto csv = art.csv("limit.csv", {"node", "prob"});
    for (Eigen::Index x = 0; x < n; ++x) csv.row({static_cast<long long>(x), lim(x)});
  }
  const GapStatistics g = gap_statistics(spec.values, 1e-12);
  const double bound = mixing_time_bound(spec, psi, eps);
  out["n"] = n;
  out["j"] = j;
  out["epsilon"] = number(eps);
  out["t_mix"] = optional_json(tr.t_mix);
  out["t_mix_bound"] = number(bound);
  out["sigma"] = number(g.sigma);
  out["sigma1"] = number(g.sigma1());
  out["delta_min"] = number(g.delta_min);
  out["simple_spectrum"] = g.simple_spectrum;
  out["limit_uniform_distance"] = number((lim.array() - 1.0 / static_cast<double>(n)).abs().maxCoeff());
  art.json("qlsamp.json", out);
  art.results() = out;
  if (g.simple_spectrum) art.check(g.sandwich_holds(), "1/delta_min <= sigma <= n log n / delta_min");
  bool below = true;
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    if (tr.times[k] >= bound && tr.distances[k] > eps) below = false;
  art.check(below, "distance <= epsilon at every grid time past the bound " + fmt(bound));
}

void run_gnp_spectrum(const RunConfig& cfg, Artifacts& art) {
  const long long n = cfg.integer("n");
  const double p = cfg.real_or("p", 0.5);
  const double eps_exp = cfg.real_or("eps-exponent", 0.25);
  if (n < 4) throw InputError("gnp-spectrum needs n >= 4");
  const auto ni = static_cast<Eigen::Index>(n);
  const std::uint64_t seed = cell_seed(cfg.master_seed, ni, 0);
  art.seed("graph", seed);
  const GnpSample g = sample_gnp(ni, p, seed, true, static_cast<Eigen::Index>(cfg.integer_or("max-n", 2000)));
  const SemicircleModel model = classical_locations(ni, p);
  const RmtReport r = rmt_report(g, model, eps_exp);
  {
    auto csv = art.csv("spectrum.csv", {"i", "lambda", "gamma"});
    for (Eigen::Index i = 1; i <= ni; ++i)
      csv.row({static_cast<long long>(i), g.spectrum.values(i - 1),
               i < ni ? io::Cell(model.location(i)) : io::Cell(std::string())});
  }
  {
    auto csv = art.csv("gap_tail.csv", {"x", "cdf"});
    for (const TailPoint& t : r.tail_hist) csv.row({t.x, t.cdf});
  }
  ordered_json out;
  out["n"] = n;
  out["p"] = number(p);
  out["seed"] = seed;
  out["edges"] = g.edges;
  out["connected"] = g.connected;
  out["lambda_top"] = number(r.lambda_top);
  out["lambda_second"] = number(r.lambda_second);
  out["delta_min"] = number(r.delta_min);
  out["deloc_max"] = number(r.deloc_max);
  out["rigidity_eps_exponent"] = number(eps_exp);
  out["rigidity_violations"] = r.rigidity_violations;
  out["rigidity_worst_ratio"] = number(r.rigidity_worst_ratio);
  out["sigma1"] = number(r.sigma1);
  out["sigma"] = number(r.sigma);
  out["avg_bulk_gap"] = number(r.avg_bulk_gap);
  out["simple_spectrum"] = r.simple_spectrum;
  out["tail_constant"] = number(r.tail_constant);
  out["semicircle_ks"] = number(r.ks_distance);
  out["semicircle_radius"] = number(model.radius_normalized);
  out["spacing_constant"] = number(spacing_constant(model));
  art.json("rmt.json", out);
  art.results() = out;
  art.check(r.simple_spectrum, "simple spectrum");
  art.note("rigidity violations " + std::to_string(r.rigidity_violations) + ", deloc_max " + fmt(r.deloc_max) +
           ", KS " + fmt(r.ks_distance));
}

void run_gnp_mixing(const RunConfig& cfg, Artifacts& art) {
  MixingExperimentConfig ex;
  ex.sizes = parse_sizes(cfg.text_or("sizes", "10:100:10"));
  ex.p = cfg.real_or("p", 0.5);
  ex.epsilon = cfg.epsilon_or(0.1);
  ex.seeds_per_size = static_cast<int>(cfg.integer_or("seeds", 3));
  ex.t_max = cfg.real_or("t-max", 1e7);
  ex.grid_points = static_cast<int>(cfg.integer_or("grid-points", 400));
  ex.master_seed = cfg.master_seed;
  ex.threads = thread_count(cfg);
  ex.keep_traces = true;
  const MixingExponentResult r = mixing_exponent_experiment(ex);
  const std::vector<double> grid = mixing_grid(ex);
  {
    auto csv = art.csv("cells.csv", {"n", "seed", "t_mix", "sigma", "sigma1", "delta_min", "deloc_max"});
    for (const MixingCell& c : r.cells) {
      art.seed("n" + std::to_string(c.n) + "_" + std::to_string(c.seed_index), c.seed);
      csv.row({static_cast<long long>(c.n), std::to_string(c.seed), optional_cell(c.t_mix), c.sigma, c.sigma1,
               c.delta_min, c.deloc_max});
    }
  }
  {
    auto csv = art.csv("traces.csv", {"n", "seed", "t", "D_P"});
    for (const MixingCell& c : r.cells)
      for (std::size_t k = 0; k < c.distances.size(); ++k)
        csv.row({static_cast<long long>(c.n), std::to_string(c.seed), grid[k], c.distances[k]});
  }
  {
    auto csv = art.csv("medians.csv", {"n", "t_mix"});
    for (const auto& [n, med] : r.per_size_median) csv.row({static_cast<long long>(n), med});
  }
  ordered_json out;
  out["exponent"] = number(r.exponent);
  out["intercept"] = number(r.intercept);
  out["fit_residual"] = number(r.fit_residual);
  out["flagged_cells"] = r.flagged;
  out["epsilon"] = number(ex.epsilon);
  out["p"] = number(ex.p);
  art.json("fit.json", out);
  art.results() = out;
  art.check(r.exponent >= 1.0 && r.exponent <= 1.6, "fitted exponent " + fmt(r.exponent) + " in [1.0, 1.6]");
  if (r.flagged) art.note(std::to_string(r.flagged) + " cells without a crossing by t_max (excluded from the fit)");
}

void run_sigma_scaling(const RunConfig& cfg, Artifacts& art) {
  SigmaScalingConfig ex;
  ex.sizes = parse_sizes(cfg.text_or("sizes", "50,100,200"));
  ex.p = cfg.real_or("p", 0.5);
  ex.seeds_per_size = static_cast<int>(cfg.integer_or("seeds", 20));
  ex.master_seed = cfg.master_seed;
  ex.exponent_slack = cfg.real_or("exponent-slack", 0.2);
  ex.threads = thread_count(cfg);
  const std::vector<SigmaCell> cells = sigma_scaling_experiment(ex);
  {
    auto csv = art.csv("cells.csv", {"n", "seed", "t_mix", "sigma", "sigma1", "delta_min", "deloc_max"});
    for (const SigmaCell& c : cells) {
      art.seed("n" + std::to_string(c.n) + "_" + std::to_string(c.seed_index), c.seed);
      csv.row({static_cast<long long>(c.n), std::to_string(c.seed), std::string(), c.sigma, c.sigma1,
               c.delta_min, c.deloc_max});
    }
  }
  ordered_json rates = ordered_json::array();
  for (Eigen::Index n : ex.sizes) {
    int total = 0, simple = 0, sandwich = 0, s1 = 0, s = 0, dmin = 0, deloc = 0, avg = 0;
    for (const SigmaCell& c : cells) {
      if (c.n != n) continue;
      ++total;
      simple += c.simple_spectrum;
      sandwich += c.sandwich || !c.simple_spectrum;
      s1 += c.sigma1_ok;
      s += c.sigma_ok;
      dmin += c.delta_min_ok;
      deloc += c.deloc_ok;
      avg += c.avg_gap_ok;
    }
    ordered_json r;
    r["n"] = n;
    r["seeds"] = total;
    r["simple_spectrum"] = rate(simple, total);
    r["sandwich"] = rate(sandwich, total);
    r["sigma1"] = rate(s1, total);
    r["sigma"] = rate(s, total);
    r["delta_min"] = rate(dmin, total);
    r["delocalisation"] = rate(deloc, total);
    r["average_gap"] = rate(avg, total);
    const std::string tag = "n=" + std::to_string(n) + ": ";
    art.check(simple == total, tag + "simple spectrum on every seed");
    art.check(sandwich == total, tag + "pair-sum sandwich on every simple spectrum");
    for (const char* key : {"sigma1", "sigma", "delta_min", "delocalisation", "average_gap"})
      art.check(r[key].get<double>() >= 0.95, tag + key + " pass rate " + fmt(r[key].get<double>()) + " >= 0.95");
    rates.push_back(r);
  }
  ordered_json out;
  out["p"] = number(ex.p);
  out["exponent_slack"] = number(ex.exponent_slack);
  out["rates"] = rates;
  art.json("rates.json", out);
  art.results() = out;
}

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"chain-info", run_chain_info},     {"hitting", run_hitting},         {"search", run_search},
      {"qssamp", run_qssamp},             {"qlsamp", run_qlsamp},           {"gnp-spectrum", run_gnp_spectrum},
      {"gnp-mixing", run_gnp_mixing},     {"sigma-scaling", run_sigma_scaling}, {"verify", run_verify},
  };
  return table;
}

}  // namespace qmix::cli
