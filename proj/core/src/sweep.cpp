#include "shearlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>

#include "shearlab/errors.hpp"
#include "shearlab/fitting.hpp"
#include "shearlab/initial_data.hpp"
#include "shearlab/run.hpp"
#include "shearlab/solver.hpp"

namespace shearlab {

namespace fs = std::filesystem;

std::vector<double> nu_ladder(const SweepConfig& sw) {
  if (!sw.nu_list.empty()) {
    auto out = sw.nu_list;
    std::sort(out.begin(), out.end());
    return out;
  }
  if (!(sw.nu_min > 0.0 && sw.nu_max >= sw.nu_min) || sw.points_per_decade < 1) {
    throw ValidationError("bad sweep nu range");
  }
  const double decades = std::log10(sw.nu_max / sw.nu_min);
  const int n = std::max(1, static_cast<int>(std::lround(decades * sw.points_per_decade)) + 1);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(n == 1 ? sw.nu_min : sw.nu_min * std::pow(10.0, decades * i / (n - 1)));
  }
  return out;
}

RunConfig cell_config(const RunConfig& base, const SweepCell& cell) {
  RunConfig c = base;
  c.physics.nu = cell.nu;
  c.data.eps = cell.eps;
  c.data.seed = cell.seed;
  c.shear.profile = cell.profile;
  c.shear.frame = "auto";
  c.time.t_final = cell.t_final;
  c.output.plots = false;
  return c;
}

namespace {

void validate_cell(const RunConfig& base, const SweepCell& cell) {
  RunConfig c = cell_config(base, cell);
  c.validate();
  const FrequencyGrid grid(c.grid.nz, c.grid.nv, c.grid.lv);
  prevalidate_resolution(grid, c.physics.nu, c.resolved_t_final());
  // band limits of the data spec
  initial_data(data_spec(c), grid, 1.0, c.physics.regularity, c.data.seed);
  auto profile = make_profile(c);
  if (profile) validate_profile(*profile, c.shear.delta_max);
}

SweepCell make_cell(const RunConfig& base, const std::string& profile, double nu, double A,
                    double gamma, std::uint64_t seed, const char* stage) {
  SweepCell c;
  c.stage = stage;
  c.profile = profile;
  c.nu = nu;
  c.A = A;
  c.gamma = gamma;
  c.eps = A * std::pow(nu, gamma);
  c.seed = seed;
  c.t_final = base.time.t_final > 0.0 ? base.time.t_final
                                      : base.sweep.t_final_factor * std::pow(nu, -1.0 / 3.0);
  return c;
}

std::string cell_dir_name(int id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "cell_%04d", id);
  return buf;
}

SweepRecord run_cell(const RunConfig& base, const SweepCell& cell, const fs::path& root) {
  SweepRecord r;
  r.cell = cell;
  const auto rel = fs::path("cells") / cell_dir_name(cell.id);
  const auto start = std::chrono::steady_clock::now();
  try {
    auto res = run_single(cell_config(base, cell), (root / rel).string());
    r.status = res.status;
    r.exit_code = res.exit_code;
    const auto& b = res.bootstrap;
    r.classification = res.frames.empty() ? "none" : b.classification;
    r.first_violation_t = b.first_violation_t;
    r.fitted_c = res.rate_fit ? res.rate_fit->c : NAN;
    r.t_e = res.rate_fit ? res.rate_fit->t_e : NAN;
    r.sup_Af = b.sup_Af;
    r.visc_L2 = b.visc_L2;
    r.ghost_L2 = b.ghost_L2;
    r.sup_u0 = b.sup_u0;
    r.du0_L2 = b.du0_L2;
    r.group_a = b.group_a;
    r.group_b = b.group_b;
    r.fnz_L2HN = b.fnz_L2HN;
    r.K = b.K;
    r.checkpoint = res.last_state ? (rel / "checkpoint.bin").string() : "";
  } catch (const std::exception& e) {
    r.status = "error";
    r.exit_code = kExitNumerical;
    r.classification = "none";
    r.first_violation_t = NAN;
    r.fitted_c = r.t_e = NAN;
  }
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<SweepRecord> run_cells(const RunConfig& base, const std::vector<SweepCell>& cells,
                                   const fs::path& root, int workers) {
  std::vector<SweepRecord> out(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) out[i] = run_cell(base, cells[i], root);
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace

SweepPlan make_plan(const RunConfig& cfg) {
  SweepPlan plan;
  plan.base = cfg;
  plan.nus = nu_ladder(cfg.sweep);
  const auto& sw = cfg.sweep;
  if (sw.profiles.empty() || sw.seeds.empty()) throw ValidationError("sweep needs profiles and seeds");
  std::vector<std::pair<double, double>> ag;  // (A, gamma)
  if (!sw.eps_list.empty()) {
    for (double e : sw.eps_list) ag.emplace_back(e, 0.0);
  } else {
    for (double A : sw.a_list) {
      for (double g : sw.gamma_list) ag.emplace_back(A, g);
    }
  }
  if (ag.empty()) throw ValidationError("sweep needs a_list/gamma_list or eps_list");
  std::sort(ag.begin(), ag.end());
  for (const auto& profile : sw.profiles) {
    for (double nu : plan.nus) {
      for (const auto& [A, g] : ag) {
        for (auto seed : sw.seeds) {
          auto c = make_cell(cfg, profile, nu, A, g, seed, "grid");
          c.id = static_cast<int>(plan.cells.size());
          plan.cells.push_back(c);
        }
      }
    }
  }
  for (const auto& c : plan.cells) validate_cell(cfg, c);
  return plan;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SHEARLAB_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string records_to_csv(const std::vector<SweepRecord>& records) {
  CsvTable t;
  t.header = {"id",       "stage",          "profile",  "nu",        "A",       "gamma",
              "eps",      "seed",           "t_final",  "status",    "exit_code",
              "classification", "first_violation_t", "fitted_c", "t_e", "sup_Af",
              "visc_L2",  "ghost_L2",       "sup_u0",   "du0_L2",    "group_a", "group_b",
              "fnz_L2HN", "K",              "checkpoint"};
  for (const auto& r : records) {
    const auto& c = r.cell;
    t.rows.push_back({std::to_string(c.id), c.stage, c.profile, format_double(c.nu),
                      format_double(c.A), format_double(c.gamma), format_double(c.eps),
                      std::to_string(c.seed), format_double(c.t_final), r.status,
                      std::to_string(r.exit_code), r.classification,
                      format_double(r.first_violation_t), format_double(r.fitted_c),
                      format_double(r.t_e), format_double(r.sup_Af), format_double(r.visc_L2),
                      format_double(r.ghost_L2), format_double(r.sup_u0), format_double(r.du0_L2),
                      format_double(r.group_a), format_double(r.group_b),
                      format_double(r.fnz_L2HN), format_double(r.K), r.checkpoint});
  }
  return to_csv(t);
}

namespace {

struct Row {
  std::string profile;
  double nu, A, gamma, eps;
  std::string seed;
  bool stable, violated;
};

std::vector<Row> rows_of(const CsvTable& t) {
  const auto ip = t.column("profile"), inu = t.column("nu"), ia = t.column("A"),
             ig = t.column("gamma"), ie = t.column("eps"), is = t.column("seed"),
             ix = t.column("exit_code"), ic = t.column("classification");
  std::vector<Row> out;
  for (const auto& r : t.rows) {
    if (r.size() != t.header.size()) throw ValidationError("malformed records row");
    const bool violated = r[ic] == "violated";
    const bool stable = std::stoi(r[ix]) == 0 && !violated;
    out.push_back({r[ip], std::stod(r[inu]), std::stod(r[ia]), std::stod(r[ig]), std::stod(r[ie]),
                   r[is], stable, violated});
  }
  return out;
}

struct Bracket {
  double a_stable = NAN;    // largest A with every seed stable
  double a_violated = NAN;  // smallest A above it with a violated seed
};

using GroupKey = std::tuple<std::string, double, double>;  // profile, gamma, nu

std::map<GroupKey, Bracket> brackets(const std::vector<Row>& rows) {
  // per (group, A): all seeds stable / any seed violated
  std::map<GroupKey, std::map<double, std::pair<bool, bool>>> by_a;
  for (const auto& r : rows) {
    auto& e = by_a[{r.profile, r.gamma, r.nu}].try_emplace(r.A, true, false).first->second;
    e.first = e.first && r.stable;
    e.second = e.second || r.violated;
  }
  std::map<GroupKey, Bracket> out;
  for (const auto& [key, as] : by_a) {
    Bracket b;
    for (const auto& [A, st] : as) {
      if (st.first && !st.second) b.a_stable = A;
    }
    for (const auto& [A, st] : as) {
      if (st.second && (std::isnan(b.a_stable) || A > b.a_stable)) {
        b.a_violated = A;
        break;
      }
    }
    out[key] = b;
  }
  return out;
}

}  // namespace

std::string summarize_records(const CsvTable& table) {
  const auto rows = rows_of(table);
  nlohmann::json j;
  std::map<std::string, int> counts;
  for (const auto& r : table.rows) counts[r[table.column("classification")]]++;
  int failed = 0;
  for (const auto& r : table.rows) failed += (r[table.column("status")] != "ok" &&
                                              r[table.column("status")] != "violated");
  j["cells"] = table.rows.size();
  j["failed"] = failed;
  j["classification_counts"] = counts;

  const auto br = brackets(rows);
  nlohmann::json profiles = nlohmann::json::object();
  std::map<std::pair<std::string, std::string>, std::pair<std::vector<double>, std::vector<double>>> pts;
  for (const auto& [key, b] : br) {
    const auto& [profile, gamma, nu] = key;
    char buf[32];
    std::snprintf(buf, sizeof buf, "gamma=%.6g", gamma);
    const std::string gname = buf;
    const bool bracketed = !std::isnan(b.a_stable) && !std::isnan(b.a_violated);
    auto opt = [](double x) { return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x); };
    nlohmann::json entry{{"nu", nu},
                         {"A_star", opt(b.a_stable)},
                         {"A_violated", opt(b.a_violated)},
                         {"eps_star", opt(b.a_stable * std::pow(nu, gamma))},
                         {"bracketed", bracketed}};
    profiles[profile][gname]["boundary"].push_back(entry);
    auto& p = pts[{profile, gname}];
    if (bracketed && b.a_stable > 0.0) {
      p.first.push_back(std::log(nu));
      p.second.push_back(std::log(b.a_stable * std::pow(nu, gamma)));
    }
  }
  for (const auto& [key, p] : pts) {
    auto& body = profiles[key.first][key.second];
    const auto& xs = p.first;
    const bool fit = xs.size() >= 2 && *std::min_element(xs.begin(), xs.end()) <
                                            *std::max_element(xs.begin(), xs.end());
    body["fit_points"] = xs.size();
    if (fit) {
      const auto lf = fit_line(p.first, p.second);
      body["gamma_hat"] = lf.slope;
      body["gamma_hat_residual"] = lf.residual;
    } else {
      body["gamma_hat"] = "undefined";
    }
  }
  j["profiles"] = profiles;

  // along each (profile, gamma, nu, seed) column a stable eps above a violated one is suspicious
  std::map<std::tuple<std::string, double, double, std::string>, std::vector<std::pair<double, bool>>> cols;
  for (const auto& r : rows) cols[{r.profile, r.gamma, r.nu, r.seed}].emplace_back(r.eps, r.violated);
  nlohmann::json flags = nlohmann::json::array();
  for (auto& [key, v] : cols) {
    std::sort(v.begin(), v.end());
    double first_violated = NAN;
    for (const auto& [eps, viol] : v) {
      if (viol && std::isnan(first_violated)) first_violated = eps;
      if (!viol && !std::isnan(first_violated) && eps > first_violated) {
        flags.push_back({{"profile", std::get<0>(key)},
                         {"gamma", std::get<1>(key)},
                         {"nu", std::get<2>(key)},
                         {"seed", std::get<3>(key)},
                         {"eps_violated", first_violated},
                         {"eps_not_violated", eps}});
      }
    }
  }
  j["monotonicity_violations"] = flags;
  return j.dump(2) + "\n";
}

SweepOutcome run_sweep(const SweepPlan& plan, const std::string& out_dir, int workers) {
  const fs::path root(out_dir);
  fs::create_directories(root);
  atomic_write((root / "plan.ini").string(), to_ini(plan.base));

  std::vector<SweepRecord> records = run_cells(plan.base, plan.cells, root, workers);

  // bisection in A between the largest stable and smallest violated A, per group
  for (int round = 0; round < plan.base.sweep.bisect_rounds; ++round) {
    std::vector<Row> rows;
    {
      const auto t = parse_csv(records_to_csv(records));
      rows = rows_of(t);
    }
    const auto br = brackets(rows);
    std::vector<SweepCell> extra;
    for (const auto& profile : plan.base.sweep.profiles) {
      for (double nu : plan.nus) {
        for (const auto& [key, b] : br) {
          if (std::get<0>(key) != profile || std::get<2>(key) != nu) continue;
          if (std::isnan(b.a_stable) || std::isnan(b.a_violated) || !(b.a_stable > 0.0)) continue;
          const double mid = std::sqrt(b.a_stable * b.a_violated);
          for (auto seed : plan.base.sweep.seeds) {
            auto c = make_cell(plan.base, profile, nu, mid, std::get<1>(key), seed, "bisect");
            c.id = static_cast<int>(records.size() + extra.size());
            extra.push_back(c);
          }
        }
      }
    }
    if (extra.empty()) break;
    auto more = run_cells(plan.base, extra, root, workers);
    records.insert(records.end(), more.begin(), more.end());
  }

  const std::string csv = records_to_csv(records);
  atomic_write((root / "records.csv").string(), csv);
  std::string timings = "id,runtime_seconds\n";
  for (const auto& r : records) timings += std::to_string(r.cell.id) + "," + format_double(r.runtime) + "\n";
  atomic_write((root / "timings.csv").string(), timings);
  // the summary is derived from the persisted records only
  SweepOutcome out;
  out.records = std::move(records);
  out.summary_json = summarize_records(read_csv((root / "records.csv").string()));
  atomic_write((root / "summary.json").string(), out.summary_json);
  return out;
}

}  // namespace shearlab
