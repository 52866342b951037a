#include "edprof/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "edprof/error.hpp"

namespace edprof {
namespace {

using nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_num(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

void put_opt(json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = num(*v);
}

std::optional<double> get_opt(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return get_num(j.at(key));
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> get_nums(const json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(get_num(x));
  return out;
}

json result_json(const TestResult& r) {
  json j;
  j["test_name"] = r.test_name;
  j["statistic"] = num(r.statistic);
  put_opt(j, "p_value", r.p_value);
  put_opt(j, "effect_size", r.effect_size);
  j["df"] = nums(r.df);
  j["group_sizes"] = r.group_sizes;
  j["method_notes"] = r.method_notes;
  j["alpha"] = r.alpha;
  return j;
}

TestResult result_from(const json& j) {
  TestResult r;
  r.test_name = j.at("test_name").get<std::string>();
  r.statistic = get_num(j.at("statistic"));
  r.p_value = get_opt(j, "p_value");
  r.effect_size = get_opt(j, "effect_size");
  r.df = get_nums(j.at("df"));
  r.group_sizes = j.at("group_sizes").get<std::vector<std::size_t>>();
  r.method_notes = j.at("method_notes").get<std::string>();
  r.alpha = j.at("alpha").get<double>();
  return r;
}

json fit_json(const RegressionFit& f) {
  json j;
  j["coefficients"] = nums(f.coefficients);
  j["standard_errors"] = nums(f.standard_errors);
  j["p_values"] = nums(f.p_values);
  j["r_squared"] = num(f.r_squared);
  j["n"] = f.n;
  j["residual_df"] = f.residual_df;
  j["has_intercept"] = f.has_intercept;
  put_opt(j, "f_statistic", f.f_statistic);
  put_opt(j, "model_p_value", f.model_p_value);
  j["notes"] = f.notes;
  return j;
}

RegressionFit fit_from(const json& j) {
  RegressionFit f;
  f.coefficients = get_nums(j.at("coefficients"));
  f.standard_errors = get_nums(j.at("standard_errors"));
  f.p_values = get_nums(j.at("p_values"));
  f.r_squared = get_num(j.at("r_squared"));
  f.n = j.at("n").get<std::size_t>();
  f.residual_df = j.at("residual_df").get<std::size_t>();
  f.has_intercept = j.at("has_intercept").get<bool>();
  f.f_statistic = get_opt(j, "f_statistic");
  f.model_p_value = get_opt(j, "model_p_value");
  f.notes = j.at("notes").get<std::string>();
  return f;
}

json cell_json(const CellMean& c) {
  return json{{"group", c.group}, {"cell", c.cell}, {"mean", num(c.mean)}, {"sd", num(c.sd)}, {"n", c.n}};
}

CellMean cell_from(const json& j) {
  CellMean c;
  c.group = j.at("group").get<std::string>();
  c.cell = j.at("cell").get<std::string>();
  c.mean = get_num(j.at("mean"));
  c.sd = get_num(j.at("sd"));
  c.n = j.at("n").get<std::size_t>();
  return c;
}

json cells_json(const std::vector<CellMean>& v) {
  json a = json::array();
  for (const auto& c : v) a.push_back(cell_json(c));
  return a;
}

std::vector<CellMean> cells_from(const json& j) {
  std::vector<CellMean> out;
  for (const auto& c : j) out.push_back(cell_from(c));
  return out;
}

json multilingual_json(const MultilingualAnalysis& m) {
  json j;
  j["baseline"] = std::string(to_string(m.baseline));
  j["languages"] = json::array();
  for (const auto& l : m.languages) {
    json e;
    e["language"] = std::string(to_string(l.language));
    e["n"] = l.n;
    e["mean_ed"] = num(l.mean_ed);
    put_opt(e, "fertility", l.fertility);
    e["fertility_estimated"] = l.fertility_estimated;
    if (l.vocab_allocation) e["vocab_allocation"] = *l.vocab_allocation;
    e["unique_tokens_per_generation"] = num(l.unique_tokens_per_generation);
    put_opt(e, "cohens_d_vs_baseline", l.cohens_d_vs_baseline);
    put_opt(e, "residualized_cohens_d", l.residualized_cohens_d);
    j["languages"].push_back(std::move(e));
  }
  put_opt(j, "fertility_rho_means", m.fertility_rho_means);
  put_opt(j, "fertility_rho_generations", m.fertility_rho_generations);
  put_opt(j, "fertility_p_generations", m.fertility_p_generations);
  j["notes"] = m.notes;
  return j;
}

MultilingualAnalysis multilingual_from(const json& j) {
  MultilingualAnalysis m;
  m.baseline = parse_language(j.at("baseline").get<std::string>());
  for (const auto& e : j.at("languages")) {
    LanguageReport l;
    l.language = parse_language(e.at("language").get<std::string>());
    l.n = e.at("n").get<std::size_t>();
    l.mean_ed = get_num(e.at("mean_ed"));
    l.fertility = get_opt(e, "fertility");
    l.fertility_estimated = e.at("fertility_estimated").get<bool>();
    if (e.contains("vocab_allocation")) l.vocab_allocation = e["vocab_allocation"].get<std::size_t>();
    l.unique_tokens_per_generation = get_num(e.at("unique_tokens_per_generation"));
    l.cohens_d_vs_baseline = get_opt(e, "cohens_d_vs_baseline");
    l.residualized_cohens_d = get_opt(e, "residualized_cohens_d");
    m.languages.push_back(l);
  }
  m.fertility_rho_means = get_opt(j, "fertility_rho_means");
  m.fertility_rho_generations = get_opt(j, "fertility_rho_generations");
  m.fertility_p_generations = get_opt(j, "fertility_p_generations");
  m.notes = j.at("notes").get<std::vector<std::string>>();
  return m;
}

// CSV helpers.

std::string fmt(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }
std::string fmt(std::size_t v) { return std::to_string(v); }

std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

class Csv {
 public:
  Csv(std::string path, std::string description, std::vector<std::string> columns)
      : file_{std::move(path), std::move(description), std::move(columns), {}} {
    row(file_.columns);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) file_.content += ',';
      file_.content += quote(cells[i]);
    }
    file_.content += '\n';
  }
  ReportFile take() { return std::move(file_); }

 private:
  ReportFile file_;
};

std::vector<std::string> groups_in_order(const std::vector<CellMean>& cells) {
  std::vector<std::string> out;
  for (const auto& c : cells) {
    if (std::find(out.begin(), out.end(), c.group) == out.end()) out.push_back(c.group);
  }
  return out;
}

// Rows = categories in the given order, columns = groups, values = means.
ReportFile wide_table(std::string path, std::string description, std::string first_column,
                      const std::vector<CellMean>& cells, const std::vector<std::string>& rows) {
  const auto groups = groups_in_order(cells);
  std::vector<std::string> cols{std::move(first_column)};
  cols.insert(cols.end(), groups.begin(), groups.end());
  Csv csv(std::move(path), std::move(description), cols);
  for (const auto& r : rows) {
    std::vector<std::string> line{r};
    bool any = false;
    for (const auto& g : groups) {
      std::string v;
      for (const auto& c : cells) {
        if (c.group == g && c.cell == r) {
          v = fmt(c.mean);
          any = true;
        }
      }
      line.push_back(v);
    }
    if (any) csv.row(line);
  }
  return csv.take();
}

ReportFile long_table(std::string path, std::string description, std::string group_column,
                      std::string cell_column, const std::vector<CellMean>& cells) {
  Csv csv(std::move(path), std::move(description),
          {std::move(group_column), std::move(cell_column), "mean", "sd", "n"});
  for (const auto& c : cells) csv.row({c.group, c.cell, fmt(c.mean), fmt(c.sd), fmt(c.n)});
  return csv.take();
}

std::vector<std::string> category_names(std::initializer_list<PromptCategory> cats) {
  std::vector<std::string> out;
  for (auto c : cats) out.emplace_back(to_string(c));
  return out;
}

}  // namespace

std::string battery_to_json(const BatteryReport& r) {
  json j;
  j["input_count"] = r.input_count;
  json o;
  o["partition"] = std::string(to_string(r.options.partition));
  o["granularity"] = std::string(to_string(r.options.granularity));
  o["alpha"] = r.options.alpha;
  o["baseline_language"] = std::string(to_string(r.options.baseline_language));
  o["analyses"] = json(std::vector<std::string>(r.options.analyses.begin(), r.options.analyses.end()));
  j["options"] = std::move(o);

  j["tests"] = json::array();
  for (const auto& t : r.tests) {
    json e;
    e["id"] = t.id;
    e["partition"] = t.partition;
    e["n"] = t.n;
    if (t.result) e["result"] = result_json(*t.result);
    if (t.fit) e["fit"] = fit_json(*t.fit);
    e["posthoc"] = json::array();
    for (const auto& p : t.posthoc) {
      e["posthoc"].push_back(json{{"first", p.first}, {"second", p.second}, {"result", result_json(p.result)}});
    }
    e["labels"] = t.labels;
    e["ordering"] = t.ordering;
    e["notes"] = t.notes;
    e["skip_reason"] = t.skip_reason;
    j["tests"].push_back(std::move(e));
  }
  j["f1_partitions"] = json::array();
  for (const auto& p : r.f1_partitions) j["f1_partitions"].push_back(json{{"partition", p.partition}, {"n", p.n}});
  j["intrinsic"] = json::array();
  for (const auto& f : r.intrinsic) {
    json e;
    e["model"] = f.model;
    put_opt(e, "neutral_mean", f.neutral_mean);
    put_opt(e, "semantic_mean", f.semantic_mean);
    put_opt(e, "fraction", f.fraction);
    j["intrinsic"].push_back(std::move(e));
  }
  j["neutral_means"] = cells_json(r.neutral_means);
  j["domain_means"] = cells_json(r.domain_means);
  j["category_means"] = cells_json(r.category_means);
  j["language_means"] = cells_json(r.language_means);
  j["temperature"] = json::array();
  for (const auto& t : r.temperature) {
    json e;
    e["model"] = t.model;
    e["levels"] = cells_json(t.levels);
    put_opt(e, "r_raw", t.r_raw);
    put_opt(e, "p_raw", t.p_raw);
    put_opt(e, "r_levels", t.r_levels);
    j["temperature"].push_back(std::move(e));
  }
  if (r.convergence) {
    const auto& c = *r.convergence;
    json e;
    e["granularity"] = std::string(to_string(c.granularity));
    e["models"] = c.models;
    e["rho"] = json::array();
    for (const auto& row : c.rho) {
      json a = json::array();
      for (const auto& v : row) a.push_back(v ? num(*v) : json(nullptr));
      e["rho"].push_back(std::move(a));
    }
    e["shared_cells"] = c.shared_cells;
    j["convergence"] = std::move(e);
  }
  if (r.multilingual) j["multilingual"] = multilingual_json(*r.multilingual);
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

BatteryReport battery_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    BatteryReport r;
    r.input_count = j.at("input_count").get<std::size_t>();
    const auto& o = j.at("options");
    r.options.partition = parse_partition(o.at("partition").get<std::string>());
    r.options.granularity = parse_granularity(o.at("granularity").get<std::string>());
    r.options.alpha = o.at("alpha").get<double>();
    r.options.baseline_language = parse_language(o.at("baseline_language").get<std::string>());
    for (const auto& a : o.at("analyses")) r.options.analyses.insert(a.get<std::string>());

    for (const auto& e : j.at("tests")) {
      TestOutcome t;
      t.id = e.at("id").get<std::string>();
      t.partition = e.at("partition").get<std::string>();
      t.n = e.at("n").get<std::size_t>();
      if (e.contains("result")) t.result = result_from(e["result"]);
      if (e.contains("fit")) t.fit = fit_from(e["fit"]);
      for (const auto& p : e.at("posthoc")) {
        t.posthoc.push_back({p.at("first").get<std::size_t>(), p.at("second").get<std::size_t>(),
                             result_from(p.at("result"))});
      }
      t.labels = e.at("labels").get<std::vector<std::string>>();
      t.ordering = e.at("ordering").get<std::vector<std::string>>();
      t.notes = e.at("notes").get<std::vector<std::string>>();
      t.skip_reason = e.at("skip_reason").get<std::string>();
      r.tests.push_back(std::move(t));
    }
    for (const auto& p : j.at("f1_partitions")) {
      r.f1_partitions.push_back({p.at("partition").get<std::string>(), p.at("n").get<std::size_t>()});
    }
    for (const auto& e : j.at("intrinsic")) {
      r.intrinsic.push_back({e.at("model").get<std::string>(), get_opt(e, "neutral_mean"),
                             get_opt(e, "semantic_mean"), get_opt(e, "fraction")});
    }
    r.neutral_means = cells_from(j.at("neutral_means"));
    r.domain_means = cells_from(j.at("domain_means"));
    r.category_means = cells_from(j.at("category_means"));
    r.language_means = cells_from(j.at("language_means"));
    for (const auto& e : j.at("temperature")) {
      TemperatureSensitivity t;
      t.model = e.at("model").get<std::string>();
      t.levels = cells_from(e.at("levels"));
      t.r_raw = get_opt(e, "r_raw");
      t.p_raw = get_opt(e, "p_raw");
      t.r_levels = get_opt(e, "r_levels");
      r.temperature.push_back(std::move(t));
    }
    if (j.contains("convergence")) {
      const auto& e = j["convergence"];
      ConvergenceMatrix c;
      c.granularity = parse_granularity(e.at("granularity").get<std::string>());
      c.models = e.at("models").get<std::vector<std::string>>();
      for (const auto& row : e.at("rho")) {
        std::vector<std::optional<double>> out;
        for (const auto& v : row) {
          out.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
        }
        c.rho.push_back(std::move(out));
      }
      c.shared_cells = e.at("shared_cells").get<std::vector<std::vector<std::size_t>>>();
      r.convergence = std::move(c);
    }
    if (j.contains("multilingual")) r.multilingual = multilingual_from(j["multilingual"]);
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("malformed battery report: ") + ex.what());
  }
}

void write_battery(const std::filesystem::path& path, const BatteryReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write battery report " + path.string());
  out << battery_to_json(report);
  if (!out) throw IoError("failed writing battery report " + path.string());
}

BatteryReport read_battery(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open battery report " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return battery_from_json(ss.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::vector<ReportFile> render_report(const BatteryReport& r) {
  std::vector<ReportFile> files;

  {
    Csv csv("tables/falsification.csv", "One row per battery test outcome and partition.",
            {"id", "partition", "n", "status", "test", "statistic", "p_value", "effect_size", "df",
             "significant", "slope", "slope_se", "r_squared", "notes"});
    for (const auto& t : r.tests) {
      std::vector<std::string> notes = t.notes;
      std::string test, stat, p, eff, df, sig, slope, se, r2;
      if (t.result) {
        const auto& x = *t.result;
        test = x.test_name;
        stat = fmt(x.statistic);
        p = fmt(x.p_value);
        eff = fmt(x.effect_size);
        std::vector<std::string> d;
        for (double v : x.df) d.push_back(fmt(v));
        df = join(d, ";");
        sig = x.p_value ? (x.significant() ? "true" : "false") : "";
        notes.insert(notes.begin(), x.method_notes);
      }
      if (t.fit) {
        const auto& f = *t.fit;
        if (test.empty()) test = "ols";
        if (stat.empty()) stat = fmt(f.f_statistic);
        if (p.empty()) p = fmt(f.model_p_value);
        const auto k = f.slope_index(0);
        if (k < f.coefficients.size()) slope = fmt(f.coefficients[k]);
        if (k < f.standard_errors.size()) se = fmt(f.standard_errors[k]);
        r2 = fmt(f.r_squared);
        notes.push_back(f.notes);
      }
      notes.push_back(t.skip_reason);
      csv.row({t.id, t.partition, fmt(t.n), t.skipped() ? "skipped" : "ok", test, stat, p, eff, df, sig,
               slope, se, r2, join(notes, "; ")});
    }
    files.push_back(csv.take());
  }
  {
    Csv csv("tables/posthoc.csv", "Pairwise comparisons attached to a test; groups named by label.",
            {"id", "partition", "first", "second", "test", "statistic", "p_value", "effect_size",
             "significant"});
    for (const auto& t : r.tests) {
      for (const auto& pr : t.posthoc) {
        const auto label = [&](std::size_t i) { return i < t.labels.size() ? t.labels[i] : fmt(i); };
        const auto& x = pr.result;
        csv.row({t.id, t.partition, label(pr.first), label(pr.second), x.test_name, fmt(x.statistic),
                 fmt(x.p_value), fmt(x.effect_size), x.p_value ? (x.significant() ? "true" : "false") : ""});
      }
    }
    files.push_back(csv.take());
  }
  {
    Csv csv("tables/f1_partitions.csv", "Summaries per F1 partition.", {"partition", "n"});
    for (const auto& p : r.f1_partitions) csv.row({p.partition, fmt(p.n)});
    files.push_back(csv.take());
  }
  files.push_back(wide_table("tables/neutral_categories.csv",
                             "Mean ED by neutral prompt category; one column per architecture or model.",
                             "category", r.neutral_means,
                             category_names({PromptCategory::random_ascii, PromptCategory::nonsense_syllables,
                                             PromptCategory::explicit_randomness, PromptCategory::neutral_stub,
                                             PromptCategory::empty})));
  files.push_back(wide_table("tables/domains.csv",
                             "Mean ED by semantic domain, pooled over temperatures; one column per model.",
                             "domain", r.domain_means,
                             category_names({PromptCategory::code, PromptCategory::news, PromptCategory::fiction,
                                             PromptCategory::wikipedia})));
  files.push_back(long_table("tables/categories.csv", "Mean ED per model and prompt category.", "model",
                             "category", r.category_means));
  {
    Csv csv("tables/languages.csv",
            "Per-language ED with tokenizer properties, ascending ED. Cohen's d against the baseline.",
            {"language", "n", "ed", "fertility", "fertility_estimated", "vocab_allocation",
             "unique_tokens_per_generation", "cohens_d", "residualized_cohens_d"});
    if (r.multilingual) {
      for (const auto& l : r.multilingual->languages) {
        csv.row({std::string(to_string(l.language)), fmt(l.n), fmt(l.mean_ed), fmt(l.fertility),
                 l.fertility ? (l.fertility_estimated ? "true" : "false") : "",
                 l.vocab_allocation ? fmt(*l.vocab_allocation) : "", fmt(l.unique_tokens_per_generation),
                 fmt(l.cohens_d_vs_baseline), fmt(l.residualized_cohens_d)});
      }
    }
    files.push_back(csv.take());
  }
  {
    Csv csv("tables/fertility_correlation.csv", "Spearman rho between fertility and ED.",
            {"level", "rho", "p_value"});
    if (r.multilingual) {
      const auto& m = *r.multilingual;
      if (m.fertility_rho_means) csv.row({"language_means", fmt(m.fertility_rho_means), ""});
      if (m.fertility_rho_generations) {
        csv.row({"generations", fmt(m.fertility_rho_generations), fmt(m.fertility_p_generations)});
      }
    }
    files.push_back(csv.take());
  }
  {
    Csv csv("tables/intrinsic.csv", "Neutral over semantic mean ED per model.",
            {"model", "neutral_mean", "semantic_mean", "fraction"});
    for (const auto& f : r.intrinsic) {
      csv.row({f.model, fmt(f.neutral_mean), fmt(f.semantic_mean), fmt(f.fraction)});
    }
    files.push_back(csv.take());
  }
  {
    Csv csv("tables/temperature.csv", "Temperature sensitivity per model: Pearson r of ED on T.",
            {"model", "levels", "r_raw", "p_raw", "r_levels"});
    for (const auto& t : r.temperature) {
      csv.row({t.model, fmt(t.levels.size()), fmt(t.r_raw), fmt(t.p_raw), fmt(t.r_levels)});
    }
    files.push_back(csv.take());
  }
  {
    std::vector<std::string> cols{"model"};
    if (r.convergence) cols.insert(cols.end(), r.convergence->models.begin(), r.convergence->models.end());
    Csv csv("tables/convergence.csv",
            "Spearman rho between model domain profiles" +
                (r.convergence ? " at granularity " + std::string(to_string(r.convergence->granularity)) : "") +
                "; empty when fewer than three shared cells.",
            cols);
    if (r.convergence) {
      const auto& c = *r.convergence;
      for (std::size_t i = 0; i < c.models.size(); ++i) {
        std::vector<std::string> line{c.models[i]};
        for (const auto& v : c.rho[i]) line.push_back(fmt(v));
        csv.row(line);
      }
    }
    files.push_back(csv.take());
  }

  {
    Csv csv("plots/intrinsic.csv", "Bar series: neutral and semantic mean ED per model.",
            {"model", "class", "mean"});
    for (const auto& f : r.intrinsic) {
      if (f.neutral_mean) csv.row({f.model, "neutral", fmt(f.neutral_mean)});
      if (f.semantic_mean) csv.row({f.model, "semantic", fmt(f.semantic_mean)});
    }
    files.push_back(csv.take());
  }
  {
    Csv csv("plots/temperature.csv", "Line series: mean ED per temperature level, one series per model.",
            {"model", "temperature", "mean", "sd", "n"});
    for (const auto& t : r.temperature) {
      for (const auto& c : t.levels) csv.row({t.model, c.cell, fmt(c.mean), fmt(c.sd), fmt(c.n)});
    }
    files.push_back(csv.take());
  }
  files.push_back(long_table("plots/neutral.csv", "Bar series: mean ED per neutral category and group.",
                             "group", "category", r.neutral_means));
  files.push_back(long_table("plots/languages.csv", "Bar series: mean ED per language and model.", "model",
                             "language", r.language_means));
  return files;
}

std::vector<std::string> write_report(const std::filesystem::path& out_dir, const BatteryReport& report) {
  const auto files = render_report(report);
  json index = json::array();
  std::vector<std::string> written;
  for (const auto& f : files) {
    const auto path = out_dir / f.path;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << f.content;
    if (!out) throw IoError("failed writing " + path.string());
    index.push_back(json{{"path", f.path}, {"description", f.description}, {"columns", f.columns}});
    written.push_back(f.path);
  }
  const auto idx = out_dir / "index.json";
  std::ofstream out(idx, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + idx.string());
  out << index.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + idx.string());
  written.emplace_back("index.json");
  return written;
}

}  // namespace edprof
