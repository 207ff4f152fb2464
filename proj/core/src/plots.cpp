#include "shearlab/plots.hpp"

#include <cmath>
#include <filesystem>
#include <nlohmann/json.hpp>

#include "shearlab/config.hpp"
#include "shearlab/errors.hpp"
#include "shearlab/io.hpp"

namespace shearlab {

namespace fs = std::filesystem;

namespace {

const char* kDecayScript = R"(import csv
import math
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "series.csv")) as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]
y = [float(r["nz_L2"]) for r in rows]

NU = @NU@
C = @C@
INTERCEPT = @INTERCEPT@

fig, ax = plt.subplots(figsize=(6, 4))
ax.semilogy(t, y, label="||f_nz||")
if C is not None and y and y[0] > 0:
    ax.semilogy(t, [y[0] * math.exp(INTERCEPT - C * NU * s ** 3) for s in t], "--",
                label="exp(-c nu t^3), c = %.3g" % C)
ax.set_xlabel("t")
ax.set_ylabel("L2 norm of nonzero modes")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "decay.png"), dpi=120)
)";

const char* kBudgetScript = R"(import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "series.csv")) as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]
emax = max(float(r["E_A"]) for r in rows) or 1.0
r = [abs(float(x["budget_residual"])) / emax for x in rows]

fig, ax = plt.subplots(figsize=(6, 4))
ax.semilogy(t, [max(v, 1e-300) for v in r])
ax.set_xlabel("t")
ax.set_ylabel("|budget residual| / max E_A")
fig.tight_layout()
fig.savefig(os.path.join(here, "budget.png"), dpi=120)
)";

const char* kBoundaryScript = R"(import json
import math
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "summary.json")) as fh:
    summary = json.load(fh)
groups = summary["profiles"]["@PROFILE@"]

fig, ax = plt.subplots(figsize=(6, 4))
for gname, body in sorted(groups.items()):
    pts = [(b["nu"], b["eps_star"]) for b in body["boundary"] if b.get("eps_star")]
    if not pts:
        continue
    xs = [math.log10(p[0]) for p in pts]
    ys = [math.log10(p[1]) for p in pts]
    ax.scatter(xs, ys, label=gname)
    slope = body.get("gamma_hat")
    if isinstance(slope, (int, float)) and len(xs) >= 2:
        x0, y0 = xs[0], ys[0]
        ax.plot([min(xs), max(xs)], [y0 + slope * (min(xs) - x0), y0 + slope * (max(xs) - x0)],
                "--", label="slope %.3f" % slope)
ax.set_xlabel("log10 nu")
ax.set_ylabel("log10 eps*")
ax.set_title("@PROFILE@")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "boundary_@PROFILE@.png"), dpi=120)
)";

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::vector<std::string> run_plots(const fs::path& dir) {
  const auto series = read_csv((dir / "series.csv").string());
  for (const char* c : {"t", "E_A", "nz_L2", "budget_residual"}) series.column(c);

  std::string nu = "None", c = "None", intercept = "0.0";
  if (fs::exists(dir / "config.ini")) nu = format_double(load_config((dir / "config.ini").string()).physics.nu);
  if (fs::exists(dir / "rate_fit.json")) {
    auto j = nlohmann::json::parse(read_file((dir / "rate_fit.json").string()));
    if (j["c"].is_number()) c = format_double(j["c"].get<double>());
    if (j["intercept"].is_number()) intercept = format_double(j["intercept"].get<double>());
  }
  if (nu == "None") c = "None";
  std::string decay = replace_all(kDecayScript, "@NU@", nu);
  decay = replace_all(decay, "@C@", c);
  decay = replace_all(decay, "@INTERCEPT@", intercept);
  const auto p1 = (dir / "plot_decay.py").string();
  const auto p2 = (dir / "plot_budget.py").string();
  atomic_write(p1, decay);
  atomic_write(p2, kBudgetScript);
  return {p1, p2};
}

std::vector<std::string> sweep_plots(const fs::path& dir) {
  read_csv((dir / "records.csv").string()).column("classification");
  if (!fs::exists(dir / "summary.json")) throw ValidationError("missing file " + (dir / "summary.json").string());
  auto j = nlohmann::json::parse(read_file((dir / "summary.json").string()));
  if (!j.contains("profiles")) throw ValidationError("summary.json has no profiles");
  std::vector<std::string> out;
  for (const auto& [profile, body] : j["profiles"].items()) {
    const auto path = (dir / ("plot_boundary_" + profile + ".py")).string();
    atomic_write(path, replace_all(kBoundaryScript, "@PROFILE@", profile));
    out.push_back(path);
  }
  return out;
}

}  // namespace

std::vector<std::string> emit_plots(const std::string& dir_str) {
  const fs::path dir(dir_str);
  if (fs::exists(dir / "series.csv")) return run_plots(dir);
  if (fs::exists(dir / "records.csv")) return sweep_plots(dir);
  throw ValidationError("missing file: no series.csv or records.csv in " + dir_str);
}

}  // namespace shearlab
