// edprof: command-line front end. See README.md for the command reference.

#include <iostream>

#include <CLI11.hpp>

#include "edprof/commands.hpp"

int main(int argc, char** argv) {
  using namespace edprof;
  RunConfig c;
  std::string manifest, out = ".", summaries, battery, vocab, corpus = "corpus";

  CLI::App app{"Entropic deviation profiler"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value config file; command keys go under [command] sections");
  app.add_option("--manifest", manifest, "manifest.jsonl (default <out>/manifest.jsonl)");
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--seed", c.seed, "base seed")->capture_default_str();
  app.add_option("--jobs", c.jobs, "worker threads for summarize")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--partition", c.partition, "F1 partition: per_model_class, per_model, per_model_category, pooled")
      ->capture_default_str();

  auto* prompts = app.add_subcommand("prompts", "generate the prompt suite and manifest rows");
  prompts->add_option("--corpus", corpus, "semantic corpus root")->capture_default_str();
  prompts->add_option("--seeds", c.seeds, "seeds per (category, temperature)")->capture_default_str();
  prompts->add_option("--categories", c.categories, "categories (default all nine)")->delimiter(',');
  prompts->add_option("--languages", c.languages, "languages")->delimiter(',')->capture_default_str();
  prompts->add_option("--temperatures", c.temperatures, "temperatures")->delimiter(',')->capture_default_str();
  prompts->add_option("--model", c.model, "model name")->capture_default_str();
  prompts->add_option("--arch", c.architecture, "transformer or ssm")->capture_default_str();
  prompts->add_option("--params", c.param_count, "parameter count")->capture_default_str();
  prompts->add_option("--vocab-size", c.vocab_size, "model vocabulary size")->required();
  prompts->add_option("--length-budget", c.length_budget, "neutral prompt length budget")->capture_default_str();
  prompts->add_option("--window-chars", c.window_chars, "semantic excerpt length in characters")
      ->capture_default_str();
  prompts->add_option("--vocab", vocab, "vocabulary file for token count estimates");
  prompts->add_option("--quantization", c.quantization, "quantization label recorded per row");
  prompts->add_option("--chat-template", c.chat_template, "chat template flag recorded per row");

  auto* summarize = app.add_subcommand("summarize", "summarize every stream in the manifest");
  summarize->add_option("--std", c.std_convention, "sample or population")->capture_default_str();

  auto* bat = app.add_subcommand("battery", "run the falsification battery over summaries");
  bat->add_option("--summaries", summaries, "summaries.jsonl (default <out>/summaries.jsonl)");
  bat->add_option("--granularity", c.granularity, "convergence cells: domain, domain_temperature, prompt")
      ->capture_default_str();
  bat->add_option("--alpha", c.alpha, "significance level")->capture_default_str();
  bat->add_option("--baseline", c.baseline, "baseline language")->capture_default_str();
  bat->add_option("--analyses", c.analyses, "subset of F1..F8, neutral_gradient, convergence, tables")
      ->delimiter(',');
  bat->add_option("--vocab", vocab, "vocabulary file for vocabulary allocation");

  auto* synth = app.add_subcommand("synth", "write synthetic streams with planted ED");
  synth->add_option("--regime", c.regime, "transformer_like or ssm_like")->capture_default_str();
  synth->add_option("--generations", c.generations, "generations per (temperature, category)")
      ->capture_default_str();
  synth->add_option("--length", c.length, "positions per generation")->capture_default_str();
  synth->add_option("--synth-vocab", c.synth_vocab, "vocabulary size")->capture_default_str();
  synth->add_option("--drift", c.drift, "planted ED drift per generation index")->capture_default_str();
  synth->add_option("--width", c.width, "f32 or f64")->capture_default_str();
  synth->add_option("--temperatures", c.temperatures, "temperatures")->delimiter(',')->capture_default_str();

  auto* zipf = app.add_subcommand("zipf", "Zipf baseline ED table");
  zipf->add_option("--alphas", c.alphas, "exponents")->delimiter(',')->capture_default_str();
  zipf->add_option("--zipf-vocab", c.zipf_vocab, "vocabulary sizes")->delimiter(',')->capture_default_str();

  auto* report = app.add_subcommand("report", "emit CSV tables and plot series from battery.json");
  report->add_option("--battery", battery, "battery.json (default <out>/battery.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  c.manifest = manifest;
  c.out = out;
  c.summaries = summaries;
  c.battery = battery;
  c.vocab = vocab;
  c.corpus = corpus;

  int (*cmd)(const RunConfig&, std::ostream&) = nullptr;
  if (prompts->parsed()) cmd = cmd_prompts;
  if (summarize->parsed()) cmd = cmd_summarize;
  if (bat->parsed()) cmd = cmd_battery;
  if (synth->parsed()) cmd = cmd_synth;
  if (zipf->parsed()) cmd = cmd_zipf;
  if (report->parsed()) cmd = cmd_report;
  return run_command([&] { return cmd(c, std::cerr); }, std::cerr);
}
