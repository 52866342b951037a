#include "edprof/battery.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "edprof/error.hpp"

namespace edprof {
namespace {

using Summaries = std::span<const GenerationSummary>;
using Bucket = std::vector<const GenerationSummary*>;

std::string temp_label(double t) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, t);
  return std::string(buf, r.ptr);
}

std::string model_key(const GenerationSummary& g) { return "model=" + g.row.model_name; }

template <class Key>
std::map<std::string, Bucket> group_by(Summaries s, Key key) {
  std::map<std::string, Bucket> out;
  for (const auto& g : s) out[key(g)].push_back(&g);
  return out;
}

std::vector<double> ed_values(const Bucket& b) {
  std::vector<double> v;
  v.reserve(b.size());
  for (const auto* g : b) v.push_back(g->ed_mean);
  return v;
}

CellMean cell_mean(std::string group, std::string cell, const std::vector<double>& v) {
  CellMean c;
  c.group = std::move(group);
  c.cell = std::move(cell);
  c.n = v.size();
  c.mean = mean(v);
  c.sd = v.size() >= 2 ? std::sqrt(sample_variance(v)) : 0.0;
  return c;
}

TestOutcome skipped(std::string id, std::string partition, std::size_t n, std::string reason) {
  TestOutcome o;
  o.id = std::move(id);
  o.partition = std::move(partition);
  o.n = n;
  o.skip_reason = std::move(reason);
  return o;
}

std::vector<std::string> order_by_mean(const std::vector<std::string>& labels,
                                       const std::vector<std::vector<double>>& groups) {
  std::vector<std::size_t> idx(labels.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](auto a, auto b) { return mean(groups[a]) < mean(groups[b]); });
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(labels[i]);
  return out;
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

// Per model: category -> values, in kAllCategories order.
std::vector<std::pair<PromptCategory, std::vector<double>>> by_category(const Bucket& b) {
  std::vector<std::pair<PromptCategory, std::vector<double>>> out;
  for (auto c : kAllCategories) {
    std::vector<double> v;
    for (const auto* g : b) {
      if (g->row.prompt_category == c) v.push_back(g->ed_mean);
    }
    if (!v.empty()) out.emplace_back(c, std::move(v));
  }
  return out;
}

}  // namespace

std::string_view to_string(PartitionScheme s) noexcept {
  switch (s) {
    case PartitionScheme::per_model_class: return "per_model_class";
    case PartitionScheme::per_model: return "per_model";
    case PartitionScheme::per_model_category: return "per_model_category";
    case PartitionScheme::pooled: return "pooled";
  }
  return "per_model_class";
}

PartitionScheme parse_partition(std::string_view s) {
  for (auto p : {PartitionScheme::per_model_class, PartitionScheme::per_model,
                 PartitionScheme::per_model_category, PartitionScheme::pooled}) {
    if (to_string(p) == s) return p;
  }
  throw ValidationError("unknown partition scheme '" + std::string(s) + "'");
}

std::string_view to_string(ProfileGranularity g) noexcept {
  switch (g) {
    case ProfileGranularity::domain: return "domain";
    case ProfileGranularity::domain_temperature: return "domain_temperature";
    case ProfileGranularity::prompt: return "prompt";
  }
  return "domain";
}

ProfileGranularity parse_granularity(std::string_view s) {
  for (auto g : {ProfileGranularity::domain, ProfileGranularity::domain_temperature,
                 ProfileGranularity::prompt}) {
    if (to_string(g) == s) return g;
  }
  throw ValidationError("unknown profile granularity '" + std::string(s) + "'");
}

void validate_analyses(const std::set<std::string>& names) {
  for (const auto& n : names) {
    if (std::find(kAnalysisNames.begin(), kAnalysisNames.end(), n) == kAnalysisNames.end()) {
      throw ValidationError("unknown analysis '" + n + "'");
    }
  }
}

double intrinsic_fraction(double neutral_mean, double semantic_mean) {
  if (!(semantic_mean > 0.0)) throw ValidationError("intrinsic fraction needs semantic mean > 0");
  return neutral_mean / semantic_mean;
}

std::vector<TestOutcome> f1_nonzero(Summaries s, PartitionScheme scheme,
                                    std::vector<PartitionCount>* counts) {
  const auto groups = group_by(s, [&](const GenerationSummary& g) -> std::string {
    switch (scheme) {
      case PartitionScheme::per_model_class:
        return model_key(g) + "/class=" + (is_neutral(g.row.prompt_category) ? "neutral" : "semantic");
      case PartitionScheme::per_model: return model_key(g);
      case PartitionScheme::per_model_category:
        return model_key(g) + "/category=" + std::string(to_string(g.row.prompt_category));
      case PartitionScheme::pooled: return "all";
    }
    return "all";
  });

  std::vector<TestOutcome> out;
  for (const auto& [key, bucket] : groups) {
    if (counts) counts->push_back({key, bucket.size()});
    const auto v = ed_values(bucket);
    if (v.size() < 2) {
      out.push_back(skipped("F1", key, v.size(), "needs at least 2 summaries"));
      continue;
    }
    TestOutcome o;
    o.id = "F1";
    o.partition = key;
    o.n = v.size();
    if (all_zero(v)) {
      TestResult r;
      r.test_name = "t_one_sample";
      r.statistic = 0.0;
      r.p_value = 1.0;
      r.effect_size = 0.0;
      r.df = {static_cast<double>(v.size() - 1)};
      r.group_sizes = {v.size()};
      r.method_notes = "every ed_mean is exactly 0; t = 0, p = 1";
      o.result = r;
    } else {
      try {
        o.result = t_one_sample(v, 0.0);
      } catch (const StatsError& e) {
        o.skip_reason = e.what();
      }
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<TestOutcome> f2_domains(Summaries s, double alpha) {
  std::vector<TestOutcome> out;
  for (const auto& [key, bucket] : group_by(s, model_key)) {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> groups;
    std::size_t n = 0;
    for (auto& [cat, v] : by_category(bucket)) {
      if (!is_semantic(cat)) continue;
      labels.emplace_back(to_string(cat));
      n += v.size();
      groups.push_back(std::move(v));
    }
    if (groups.size() < 2) {
      out.push_back(skipped("F2", key, n, "needs at least 2 semantic domains"));
      continue;
    }
    TestOutcome o;
    o.id = "F2";
    o.partition = key;
    o.n = n;
    o.labels = labels;
    o.ordering = order_by_mean(labels, groups);
    try {
      o.result = kruskal_wallis(groups);
      o.result->alpha = alpha;
    } catch (const StatsError& e) {
      o.skip_reason = e.what();
    }
    try {
      o.posthoc = tukey_hsd(groups, alpha);
    } catch (const StatsError& e) {
      o.notes.push_back(std::string("post-hoc unavailable: ") + e.what());
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<TestOutcome> f3_size_effect(Summaries s) {
  std::vector<double> gen_y, gen_x;
  std::map<std::string, std::pair<std::vector<double>, double>> models;
  for (const auto& g : s) {
    if (g.row.architecture != Architecture::transformer) continue;
    const double lp = std::log(static_cast<double>(g.row.param_count));
    gen_y.push_back(g.ed_mean);
    gen_x.push_back(lp);
    auto& m = models[g.row.model_name];
    m.first.push_back(g.ed_mean);
    m.second = lp;
  }

  std::vector<TestOutcome> out;
  {
    std::vector<double> y, x;
    for (const auto& [name, m] : models) {
      y.push_back(mean(m.first));
      x.push_back(m.second);
    }
    if (models.size() < 2) {
      out.push_back(skipped("F3", "level=model_mean", gen_y.size(),
                            "needs at least 2 transformer models"));
    } else {
      TestOutcome o;
      o.id = "F3";
      o.partition = "level=model_mean";
      o.n = gen_y.size();
      try {
        const std::vector<std::vector<double>> cols{x};
        o.fit = ols(y, cols);
        if (o.fit->residual_df == 0) {
          o.notes.push_back("zero residual degrees of freedom; no standard errors or p-values");
        }
      } catch (const StatsError& e) {
        o.skip_reason = e.what();
      }
      out.push_back(std::move(o));
    }
  }
  if (models.size() < 2) {
    out.push_back(skipped("F3", "level=generation", gen_y.size(),
                          "needs at least 2 transformer models"));
  } else {
    TestOutcome o;
    o.id = "F3";
    o.partition = "level=generation";
    o.n = gen_y.size();
    try {
      const std::vector<std::vector<double>> cols{gen_x};
      o.fit = ols(gen_y, cols);
    } catch (const StatsError& e) {
      o.skip_reason = e.what();
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<TestOutcome> f4_temperature(Summaries s, double alpha,
                                        std::vector<TemperatureSensitivity>* sensitivity) {
  std::vector<TestOutcome> out;
  for (const auto& [key, bucket] : group_by(s, model_key)) {
    std::map<double, std::vector<double>> levels;
    std::vector<double> temps, eds;
    for (const auto* g : bucket) {
      levels[g->row.temperature].push_back(g->ed_mean);
      temps.push_back(g->row.temperature);
      eds.push_back(g->ed_mean);
    }
    TemperatureSensitivity ts;
    ts.model = bucket.front()->row.model_name;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> groups;
    std::vector<double> level_t, level_m;
    for (auto& [t, v] : levels) {
      labels.push_back(temp_label(t));
      ts.levels.push_back(cell_mean(ts.model, labels.back(), v));
      level_t.push_back(t);
      level_m.push_back(ts.levels.back().mean);
      groups.push_back(v);
    }

    if (groups.size() < 2) {
      out.push_back(skipped("F4", key, bucket.size(), "needs at least 2 temperature levels"));
      if (sensitivity) sensitivity->push_back(std::move(ts));
      continue;
    }
    TestOutcome o;
    o.id = "F4";
    o.partition = key;
    o.n = bucket.size();
    o.labels = labels;
    o.ordering = order_by_mean(labels, groups);
    try {
      o.result = anova_oneway(groups);
      o.result->alpha = alpha;
    } catch (const StatsError& e) {
      o.skip_reason = e.what();
    }
    try {
      o.posthoc = tukey_hsd(groups, alpha);
    } catch (const StatsError& e) {
      o.notes.push_back(std::string("post-hoc unavailable: ") + e.what());
    }
    try {
      const auto r = pearson(temps, eds);
      ts.r_raw = r.statistic;
      ts.p_raw = r.p_value;
    } catch (const StatsError& e) {
      o.notes.push_back(std::string("Pearson r over generations unavailable: ") + e.what());
    }
    if (level_t.size() >= 3) {
      try {
        ts.r_levels = pearson(level_t, level_m).statistic;
      } catch (const StatsError&) {
      }
    }
    if (sensitivity) sensitivity->push_back(std::move(ts));
    out.push_back(std::move(o));
  }
  return out;
}

namespace {

TestOutcome summarize_dw(std::string partition, const std::vector<double>& dw, std::size_t n) {
  TestOutcome o;
  o.id = "F5";
  o.partition = std::move(partition);
  o.n = n;
  if (dw.empty()) {
    o.skip_reason = "no generation has a defined Durbin-Watson statistic";
    return o;
  }
  TestResult r;
  r.test_name = "durbin_watson";
  r.statistic = mean(dw);
  r.effect_size = r.statistic - 2.0;
  r.group_sizes = {dw.size()};
  std::size_t bands[3] = {0, 0, 0};
  for (double d : dw) ++bands[static_cast<int>(dw_band(d))];
  r.method_notes = std::string("mean DW over generations; band of mean: ") +
                   to_string(dw_band(r.statistic)) +
                   "; positive/none/negative counts: " + std::to_string(bands[0]) + "/" +
                   std::to_string(bands[1]) + "/" + std::to_string(bands[2]);
  if (dw.size() >= 2) {
    try {
      const auto t = t_one_sample(dw, 2.0);
      r.p_value = t.p_value;
      r.df = t.df;
      r.method_notes += "; p from one-sample t of DW against 2";
    } catch (const StatsError&) {
    }
  }
  o.result = r;
  return o;
}

}  // namespace

std::vector<TestOutcome> f5_autocorrelation(Summaries s) {
  std::vector<TestOutcome> out;
  for (const auto& [key, bucket] : group_by(s, model_key)) {
    std::vector<double> dw;
    for (const auto* g : bucket) {
      if (g->durbin_watson) dw.push_back(*g->durbin_watson);
    }
    out.push_back(summarize_dw(key, dw, bucket.size()));
  }
  return out;
}

TestOutcome f5_autocorrelation_series(std::span<const std::vector<double>> series) {
  std::vector<double> dw;
  for (const auto& x : series) {
    if (x.size() < 2) continue;
    const double m = mean(x);
    std::vector<double> c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i] - m;
    try {
      dw.push_back(durbin_watson(c).statistic);
    } catch (const StatsError&) {
    }
  }
  auto o = summarize_dw("series", dw, series.size());
  if (o.skipped()) o.skip_reason = "no series of length >= 2 with nonzero variance";
  return o;
}

std::vector<TestOutcome> f6_intrinsic(Summaries s, std::vector<IntrinsicFraction>* fractions) {
  std::vector<TestOutcome> out;
  for (const auto& [key, bucket] : group_by(s, model_key)) {
    IntrinsicFraction f;
    f.model = bucket.front()->row.model_name;
    std::vector<double> neutral_cat, semantic_cat, neutral_all, semantic_all;
    for (const auto& [cat, v] : by_category(bucket)) {
      (is_neutral(cat) ? neutral_cat : semantic_cat).push_back(mean(v));
      auto& all = is_neutral(cat) ? neutral_all : semantic_all;
      all.insert(all.end(), v.begin(), v.end());
    }
    if (!neutral_cat.empty()) f.neutral_mean = mean(neutral_cat);
    if (!semantic_cat.empty()) f.semantic_mean = mean(semantic_cat);

    TestOutcome o;
    o.id = "F6";
    o.partition = key;
    o.n = bucket.size();
    if (f.neutral_mean && f.semantic_mean && *f.semantic_mean > 0.0) {
      f.fraction = intrinsic_fraction(*f.neutral_mean, *f.semantic_mean);
      try {
        o.result = mann_whitney_u(neutral_all, semantic_all);
        o.result->effect_size = f.fraction;
        o.result->method_notes += "; effect_size is the intrinsic fraction";
      } catch (const StatsError& e) {
        o.skip_reason = e.what();
      }
    } else {
      o.skip_reason = "needs both neutral and semantic summaries with semantic mean > 0";
    }
    if (fractions) fractions->push_back(f);
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<TestOutcome> f7_multilingual(Summaries s, Language baseline) {
  std::vector<TestOutcome> out;
  for (const auto& [key, bucket] : group_by(s, model_key)) {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> groups;
    std::size_t n = 0, base_idx = SIZE_MAX;
    for (auto lang : kAllLanguages) {
      if (lang == Language::other) continue;
      std::vector<double> v;
      for (const auto* g : bucket) {
        if (g->row.language == lang) v.push_back(g->ed_mean);
      }
      if (v.empty()) continue;
      if (lang == baseline) base_idx = groups.size();
      labels.emplace_back(to_string(lang));
      n += v.size();
      groups.push_back(std::move(v));
    }
    if (groups.size() < 2) {
      out.push_back(skipped("F7", key, n, "needs at least 2 languages"));
      continue;
    }
    TestOutcome o;
    o.id = "F7";
    o.partition = key;
    o.n = n;
    o.labels = labels;
    o.ordering = order_by_mean(labels, groups);
    try {
      o.result = kruskal_wallis(groups);
    } catch (const StatsError& e) {
      o.skip_reason = e.what();
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        PairwiseResult pr;
        pr.first = i;
        pr.second = j;
        try {
          pr.result = mann_whitney_u(groups[i], groups[j]);
        } catch (const StatsError& e) {
          o.notes.push_back(labels[i] + " vs " + labels[j] + ": " + e.what());
          continue;
        }
        try {
          pr.result.effect_size = cohens_d(groups[i], groups[j]);
        } catch (const StatsError&) {
        }
        o.posthoc.push_back(std::move(pr));
      }
    }
    if (base_idx == SIZE_MAX) {
      o.notes.push_back("baseline language " + std::string(to_string(baseline)) + " absent");
    } else {
      for (std::size_t i = 0; i < groups.size(); ++i) {
        if (i == base_idx) continue;
        try {
          const double d = cohens_d(groups[i], groups[base_idx]);
          o.notes.push_back("cohens_d " + labels[i] + " vs " + labels[base_idx] + " = " +
                            temp_label(d));
        } catch (const StatsError&) {
        }
      }
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<TestOutcome> f8_drift(Summaries s) {
  std::vector<TestOutcome> out;
  for (const auto& [key, bucket] : group_by(s, model_key)) {
    std::vector<double> y, idx, temps;
    for (const auto* g : bucket) {
      y.push_back(g->ed_mean);
      idx.push_back(static_cast<double>(g->row.generation_index));
      temps.push_back(g->row.temperature);
    }
    TestOutcome o;
    o.id = "F8";
    o.partition = key;
    o.n = bucket.size();
    const bool temp_varies =
        std::any_of(temps.begin(), temps.end(), [&](double t) { return t != temps.front(); });
    std::vector<std::vector<double>> cols{idx};
    if (temp_varies) {
      cols.push_back(temps);
    } else {
      o.notes.push_back("temperature constant; covariate dropped");
    }
    try {
      o.fit = ols(y, cols);
    } catch (const RankDeficientError& e) {
      o.skip_reason = std::string("generation_index does not vary: ") + e.what();
    } catch (const StatsError& e) {
      o.skip_reason = e.what();
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<TestOutcome> neutral_gradient(Summaries s, std::vector<CellMean>* means) {
  std::vector<TestOutcome> out;
  // Architecture-level means average the per-model category means.
  std::map<std::pair<std::string, PromptCategory>, std::vector<double>> arch_cells;

  for (const auto& [key, bucket] : group_by(s, model_key)) {
    const auto& model = bucket.front()->row.model_name;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> groups;
    std::vector<PromptCategory> cats;
    for (auto& [cat, v] : by_category(bucket)) {
      if (!is_neutral(cat)) continue;
      if (means) means->push_back(cell_mean(model, std::string(to_string(cat)), v));
      arch_cells[{std::string(to_string(bucket.front()->row.architecture)), cat}].push_back(mean(v));
      labels.emplace_back(to_string(cat));
      cats.push_back(cat);
      groups.push_back(std::move(v));
    }

    TestOutcome o;
    o.id = "neutral_gradient";
    o.partition = key;
    o.labels = labels;
    for (const auto& g : groups) o.n += g.size();
    if (groups.size() < 2) {
      o.skip_reason = "needs at least 2 neutral categories";
      out.push_back(std::move(o));
      continue;
    }
    o.ordering = order_by_mean(labels, groups);

    // Pair observations across categories by (temperature, seed).
    std::vector<std::map<std::pair<double, std::uint64_t>, double>> keyed(cats.size());
    for (const auto* g : bucket) {
      const auto it = std::find(cats.begin(), cats.end(), g->row.prompt_category);
      if (it == cats.end()) continue;
      keyed[static_cast<std::size_t>(it - cats.begin())][{g->row.temperature, g->row.seed}] = g->ed_mean;
    }
    auto paired = [&](std::size_t i, std::size_t j) -> std::optional<TestResult> {
      std::vector<double> a, b;
      for (const auto& [k, v] : keyed[i]) {
        const auto it = keyed[j].find(k);
        if (it != keyed[j].end()) {
          a.push_back(v);
          b.push_back(it->second);
        }
      }
      try {
        return t_paired(a, b);
      } catch (const StatsError& e) {
        o.notes.push_back(labels[i] + " vs " + labels[j] + ": " + e.what());
        return std::nullopt;
      }
    };
    std::size_t ra = SIZE_MAX, em = SIZE_MAX;
    for (std::size_t i = 0; i < cats.size(); ++i) {
      if (cats[i] == PromptCategory::random_ascii) ra = i;
      if (cats[i] == PromptCategory::empty) em = i;
    }
    for (std::size_t i = 0; i < cats.size(); ++i) {
      for (std::size_t j = i + 1; j < cats.size(); ++j) {
        if (auto r = paired(i, j)) {
          PairwiseResult pr;
          pr.first = i;
          pr.second = j;
          pr.result = *r;
          o.posthoc.push_back(std::move(pr));
        }
      }
    }
    if (ra != SIZE_MAX && em != SIZE_MAX) {
      for (const auto& pr : o.posthoc) {
        if ((pr.first == ra && pr.second == em) || (pr.first == em && pr.second == ra)) {
          o.result = pr.result;
          if (pr.first == em) {
            o.result->statistic = -o.result->statistic;
            if (o.result->effect_size) o.result->effect_size = -*o.result->effect_size;
          }
          o.result->method_notes += "; random_ascii minus empty, paired by (temperature, seed)";
        }
      }
      if (!o.result) o.skip_reason = "random_ascii and empty could not be paired";
    } else {
      o.skip_reason = "random_ascii or empty category absent";
    }
    out.push_back(std::move(o));
  }
  if (means) {
    for (const auto& [k, v] : arch_cells) {
      auto c = cell_mean("architecture=" + k.first, std::string(to_string(k.second)), v);
      means->push_back(c);
    }
  }
  return out;
}

ConvergenceMatrix domain_profile_convergence(Summaries s, ProfileGranularity granularity) {
  std::map<std::string, std::map<std::string, std::vector<double>>> profiles;
  for (const auto& g : s) {
    if (!is_semantic(g.row.prompt_category)) continue;
    std::string cell;
    switch (granularity) {
      case ProfileGranularity::domain: cell = std::string(to_string(g.row.prompt_category)); break;
      case ProfileGranularity::domain_temperature:
        cell = std::string(to_string(g.row.prompt_category)) + "@" + temp_label(g.row.temperature);
        break;
      case ProfileGranularity::prompt: cell = g.row.prompt_text_ref; break;
    }
    profiles[g.row.model_name][cell].push_back(g.ed_mean);
  }

  ConvergenceMatrix m;
  m.granularity = granularity;
  std::vector<std::map<std::string, double>> means;
  for (const auto& [model, cells] : profiles) {
    m.models.push_back(model);
    std::map<std::string, double> mm;
    for (const auto& [cell, v] : cells) mm[cell] = mean(v);
    means.push_back(std::move(mm));
  }
  const std::size_t k = m.models.size();
  m.rho.assign(k, std::vector<std::optional<double>>(k));
  m.shared_cells.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      std::vector<double> a, b;
      for (const auto& [cell, v] : means[i]) {
        const auto it = means[j].find(cell);
        if (it != means[j].end()) {
          a.push_back(v);
          b.push_back(it->second);
        }
      }
      m.shared_cells[i][j] = m.shared_cells[j][i] = a.size();
      if (a.size() < 3) continue;
      try {
        m.rho[i][j] = m.rho[j][i] = spearman(a, b).statistic;
      } catch (const StatsError&) {
      }
    }
  }
  return m;
}

BatteryReport run_battery(Summaries s, const BatteryOptions& options, const TokenizerProfile* profile) {
  validate_analyses(options.analyses);
  BatteryReport rep;
  rep.input_count = s.size();
  rep.options = options;
  auto wanted = [&](std::string_view name) {
    return options.analyses.empty() || options.analyses.count(std::string(name)) > 0;
  };
  auto add = [&](std::string_view id, std::vector<TestOutcome> outcomes) {
    if (outcomes.empty()) {
      outcomes.push_back(skipped(std::string(id), "", 0, "no applicable summaries"));
    }
    for (auto& o : outcomes) rep.tests.push_back(std::move(o));
  };

  if (s.empty()) rep.warnings.push_back("empty summary set; every analysis is skipped");

  if (wanted("F1")) add("F1", f1_nonzero(s, options.partition, &rep.f1_partitions));
  if (wanted("F2")) add("F2", f2_domains(s, options.alpha));
  if (wanted("F3")) {
    auto f3 = f3_size_effect(s);
    for (const auto& o : f3) {
      for (const auto& n : o.notes) rep.warnings.push_back("F3 " + o.partition + ": " + n);
    }
    add("F3", std::move(f3));
  }
  if (wanted("F4")) add("F4", f4_temperature(s, options.alpha, &rep.temperature));
  if (wanted("F5")) add("F5", f5_autocorrelation(s));
  if (wanted("F6")) add("F6", f6_intrinsic(s, &rep.intrinsic));
  if (wanted("F7")) {
    add("F7", f7_multilingual(s, options.baseline_language));
    bool multi = false;
    for (const auto& o : rep.tests) multi = multi || (o.id == "F7" && !o.skipped());
    if (multi) rep.multilingual = analyze_languages(s, profile, options.baseline_language);
  }
  if (wanted("F8")) add("F8", f8_drift(s));
  if (wanted("neutral_gradient")) add("neutral_gradient", neutral_gradient(s, &rep.neutral_means));
  if (wanted("convergence")) rep.convergence = domain_profile_convergence(s, options.granularity);
  if (wanted("tables")) {
    for (const auto& [key, bucket] : group_by(s, model_key)) {
      const auto& model = bucket.front()->row.model_name;
      for (const auto& [cat, v] : by_category(bucket)) {
        auto c = cell_mean(model, std::string(to_string(cat)), v);
        if (is_semantic(cat)) rep.domain_means.push_back(c);
        rep.category_means.push_back(std::move(c));
      }
      for (auto lang : kAllLanguages) {
        std::vector<double> v;
        for (const auto* g : bucket) {
          if (g->row.language == lang) v.push_back(g->ed_mean);
        }
        if (!v.empty()) rep.language_means.push_back(cell_mean(model, std::string(to_string(lang)), v));
      }
    }
    if (!wanted("F4")) f4_temperature(s, options.alpha, &rep.temperature);
  }
  return rep;
}

}  // namespace edprof
