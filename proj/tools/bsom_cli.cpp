// Command-line front end. Talks to the library only through bsom/bsom.h.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bsom/bsom.h"

namespace {

struct CliError {
  std::string message;
};

void check(bsom_status status, const std::string& context) {
  if (status != BSOM_OK)
    throw CliError{context + ": " + bsom_status_name(status) + ": " + bsom_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using DatasetPtr = std::unique_ptr<bsom_dataset, Deleter<bsom_dataset, bsom_dataset_free>>;
using MapPtr = std::unique_ptr<bsom_map, Deleter<bsom_map, bsom_map_free>>;
using PartitionPtr = std::unique_ptr<bsom_partition, Deleter<bsom_partition, bsom_partition_free>>;

std::string take_string(char* s) {
  std::string out = s ? s : "";
  bsom_string_free(s);
  return out;
}

DatasetPtr load_dataset(const std::string& path, const std::string& label_col) {
  bsom_dataset* d = nullptr;
  check(bsom_dataset_load_csv(path.c_str(), label_col.empty() ? nullptr : label_col.c_str(), &d),
        "loading " + path);
  return DatasetPtr(d);
}

MapPtr load_map(const std::string& path) {
  bsom_map* m = nullptr;
  check(bsom_map_load(path.c_str(), &m), "loading " + path);
  return MapPtr(m);
}

PartitionPtr load_partition(const std::string& path) {
  bsom_partition* p = nullptr;
  check(bsom_partition_load(path.c_str(), &p), "loading " + path);
  return PartitionPtr(p);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  check(bsom_write_text_file(path.c_str(), text.c_str()), "writing " + path);
}

std::string provenance(const std::string& command, const std::vector<std::pair<std::string, std::string>>& echo) {
  std::string out = "# bsom " + std::string(bsom_version()) + " " + command + "\n";
  for (const auto& [k, v] : echo) out += "# " + k + " = " + v + "\n";
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Flat "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{"cannot open config file '" + path + "'"};
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CliError{path + ":" + std::to_string(line_no) + ": expected key = value"};
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

struct CostOptions {
  std::string range_rule = "two_max";
  std::string range_exponent = "per_block";
  std::string n_scale_rule = "sqrt_n";
  double sigma_const = 12.0;
  double sigma_floor_frac = 0.01;
  double f_R = 1.0;
  double f_sigma = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--range_rule,--range-rule", range_rule, "two_span | two_max")->capture_default_str();
    app->add_option("--range_exponent,--range-exponent", range_exponent, "per_block | per_pe")
        ->capture_default_str();
    app->add_option("--n_scale_rule,--n-scale-rule", n_scale_rule, "sqrt_n | unit | linear_n")
        ->capture_default_str();
    app->add_option("--sigma_const,--sigma-const", sigma_const)->capture_default_str();
    app->add_option("--sigma_floor_frac,--sigma-floor-frac", sigma_floor_frac)->capture_default_str();
    app->add_option("--f_R,--f-R", f_R, "range scale factor")->capture_default_str();
    app->add_option("--f_sigma,--f-sigma", f_sigma, "sigma scale factor")->capture_default_str();
  }

  bsom_cost_settings resolve() const {
    bsom_cost_settings s;
    bsom_cost_settings_default(&s);
    const std::pair<const char*, std::string> keys[] = {
        {"range_rule", range_rule},       {"range_exponent", range_exponent},
        {"n_scale_rule", n_scale_rule},   {"sigma_const", fmt(sigma_const)},
        {"sigma_floor_frac", fmt(sigma_floor_frac)}, {"f_R", fmt(f_R)},
        {"f_sigma", fmt(f_sigma)}};
    for (const auto& [k, v] : keys) check(bsom_cost_settings_set(&s, k, v.c_str()), "cost settings");
    return s;
  }

  std::vector<std::pair<std::string, std::string>> echo() const {
    return {{"range_rule", range_rule},         {"range_exponent", range_exponent},
            {"n_scale_rule", n_scale_rule},     {"sigma_const", fmt(sigma_const)},
            {"sigma_floor_frac", fmt(sigma_floor_frac)}, {"f_R", fmt(f_R)},
            {"f_sigma", fmt(f_sigma)}};
  }
};

std::vector<std::pair<double, int>> parse_schedule(const std::string& text) {
  // "0:1,0.5:0" -> (epoch fraction, half-width) pairs
  std::vector<std::pair<double, int>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw CliError{"bad neighborhood step '" + item + "'"};
    try {
      out.emplace_back(std::stod(item.substr(0, colon)), std::stoi(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw CliError{"bad neighborhood step '" + item + "'"};
    }
  }
  if (out.empty() || out.size() > BSOM_MAX_NEIGHBORHOOD_STEPS)
    throw CliError{"neighborhood schedule needs 1.." + std::to_string(BSOM_MAX_NEIGHBORHOOD_STEPS) + " steps"};
  return out;
}

// Inserts config-file values as ordinary flags ahead of the user's own, so
// command-line flags (parsed later, last value wins) override the file.
std::vector<std::string> expand_config(CLI::App& app, std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty() || args.empty()) return args;

  CLI::App* sub = nullptr;
  for (auto* s : app.get_subcommands({}))
    if (s->get_name() == args.front()) sub = s;
  if (!sub) return args;

  std::vector<std::string> injected;
  for (const auto& [key, value] : read_config(config_path)) {
    auto* opt = sub->get_option_no_throw("--" + key);
    if (!opt) continue;
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1") injected.push_back("--" + key);
    } else {
      injected.push_back("--" + key);
      injected.push_back(value);
    }
  }
  args.insert(args.begin() + 1, injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-organizing map training and Bayesian-blocks partitioning", "bsom"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string(bsom_version()));
  std::string config_path;

  // train
  auto* train = app.add_subcommand("train", "train a SOM and write the map file");
  std::string data, label_col, out;
  bsom_som_config som;
  bsom_som_config_default(&som);
  std::string schedule = "0:1,0.5:0";
  train->add_option("--config", config_path, "flat key = value run-config file");
  train->add_option("--data", data, "CSV with header row")->required();
  train->add_option("--label-col,--label_col", label_col, "class label column");
  train->add_option("--rows", som.rows)->capture_default_str();
  train->add_option("--cols", som.cols)->capture_default_str();
  train->add_option("--epochs", som.epochs)->capture_default_str();
  train->add_option("--lr_start,--lr-start", som.lr_start)->capture_default_str();
  train->add_option("--lr_end,--lr-end", som.lr_end)->capture_default_str();
  train->add_option("--neighborhood", schedule, "fraction:half_width,...")->capture_default_str();
  train->add_option("--conscience_beta,--conscience-beta", som.conscience_beta)->capture_default_str();
  train->add_option("--conscience_gamma,--conscience-gamma", som.conscience_gamma)->capture_default_str();
  train->add_option("--seed", som.seed)->capture_default_str();
  train->add_option("--out", out, "map file to write")->required();

  // partition
  auto* partition = app.add_subcommand("partition", "Bayesian-blocks partition of a map");
  std::string map_path, method = "bayes";
  int cell_limit = 9;
  bool show = false;
  CostOptions cost;
  partition->add_option("--config", config_path);
  partition->add_option("--map", map_path)->required();
  partition->add_option("--out", out, "partition file to write")->required();
  partition->add_option("--method", method, "bayes | exhaustive")
      ->check(CLI::IsMember({"bayes", "exhaustive"}))
      ->capture_default_str();
  partition->add_option("--cell_limit,--cell-limit", cell_limit)->capture_default_str();
  partition->add_flag("--show", show, "print the partitioned map");
  partition->add_option("--data", data, "labeled CSV for --show populations");
  partition->add_option("--label-col,--label_col", label_col);
  cost.attach(partition);

  // baseline
  auto* baseline = app.add_subcommand("baseline", "threshold or oracle partition of a map");
  double threshold = -1.0;
  bool normalize = false, oracle = false;
  std::string boundaries_path;
  baseline->add_option("--config", config_path);
  baseline->add_option("--map", map_path)->required();
  baseline->add_option("--threshold", threshold, "cut boundaries stronger than T");
  baseline->add_flag("--normalize", normalize, "divide attribute differences by their span");
  baseline->add_flag("--oracle", oracle, "majority-class partition (needs --data, --label-col)");
  baseline->add_option("--data", data);
  baseline->add_option("--label-col,--label_col", label_col);
  baseline->add_option("--out", out, "partition file to write")->required();
  baseline->add_option("--boundaries", boundaries_path, "boundary-strength CSV to write");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "score a partition against class labels");
  std::string partition_path, format = "text";
  evaluate->add_option("--config", config_path);
  evaluate->add_option("--map", map_path)->required();
  evaluate->add_option("--partition", partition_path)->required();
  evaluate->add_option("--data", data)->required();
  evaluate->add_option("--label-col,--label_col", label_col)->required();
  evaluate->add_option("--format", format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  evaluate->add_option("--out", out, "report file (default: stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "stability of the partition under R and sigma scaling");
  bsom_sweep_spec spec;
  bsom_sweep_spec_default(&spec);
  sweep->add_option("--config", config_path);
  sweep->add_option("--map", map_path)->required();
  sweep->add_option("--out", out, "stability CSV to write")->required();
  sweep->add_option("--points", spec.points)->capture_default_str();
  sweep->add_option("--lo_exp,--lo-exp", spec.lo_exp)->capture_default_str();
  sweep->add_option("--hi_exp,--hi-exp", spec.hi_exp)->capture_default_str();
  sweep->add_option("--threads", spec.threads)->capture_default_str();
  cost.attach(sweep);

  // render
  auto* render = app.add_subcommand("render", "ASCII view of a map and optional partition");
  render->add_option("--config", config_path);
  render->add_option("--map", map_path)->required();
  render->add_option("--partition", partition_path);
  render->add_option("--data", data);
  render->add_option("--label-col,--label_col", label_col);
  render->add_option("--out", out, "text file (default: stdout)");

  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);

  try {
    args = expand_config(app, std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "bsom: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (const auto* sub : app.get_subcommands())
      if (sub->parsed()) failed = sub;
    std::cerr << failed->help();
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  } catch (const CliError& e) {
    std::cerr << "bsom: " << e.message << "\n";
    return 2;
  }

  try {
    if (train->parsed()) {
      const auto steps = parse_schedule(schedule);
      som.neighborhood_steps = steps.size();
      for (std::size_t k = 0; k < steps.size(); ++k) {
        som.neighborhood_fraction[k] = steps[k].first;
        som.neighborhood_half_width[k] = steps[k].second;
      }
      auto dataset = load_dataset(data, label_col);
      bsom_map* raw = nullptr;
      check(bsom_train(dataset.get(), &som, &raw), "training");
      MapPtr map(raw);
      check(bsom_map_save(map.get(), out.c_str()), "writing " + out);
      double qe = 0.0;
      check(bsom_map_quantization_error(map.get(), dataset.get(), &qe), "quantization error");
      std::cout << "wrote " << out << " (" << som.rows << "x" << som.cols << ", seed " << som.seed
                << ", quantization error " << fmt(qe) << ")\n";
    } else if (partition->parsed()) {
      auto map = load_map(map_path);
      const auto settings = cost.resolve();
      bsom_partition* raw = nullptr;
      if (method == "exhaustive")
        check(bsom_partition_exhaustive(map.get(), &settings, cell_limit, &raw, nullptr), "partitioning");
      else
        check(bsom_partition_som(map.get(), &settings, &raw), "partitioning");
      PartitionPtr p(raw);
      check(bsom_partition_save(p.get(), out.c_str()), "writing " + out);
      std::cout << "wrote " << out << " (" << bsom_partition_block_count(p.get())
                << " blocks, cost " << fmt(bsom_partition_cost(p.get())) << ")\n";
      if (show) {
        DatasetPtr dataset;
        if (!data.empty()) dataset = load_dataset(data, label_col);
        char* text = nullptr;
        check(bsom_render_map(map.get(), p.get(), dataset.get(), &text), "rendering");
        std::cout << take_string(text);
      }
    } else if (baseline->parsed()) {
      auto map = load_map(map_path);
      bsom_partition* raw = nullptr;
      if (oracle) {
        if (data.empty() || label_col.empty()) throw CliError{"--oracle needs --data and --label-col"};
        auto dataset = load_dataset(data, label_col);
        check(bsom_partition_oracle(map.get(), dataset.get(), &raw), "oracle partition");
      } else {
        if (threshold < 0.0) throw CliError{"--threshold T (T >= 0) or --oracle is required"};
        check(bsom_partition_threshold(map.get(), threshold, normalize ? 1 : 0, &raw),
              "threshold partition");
      }
      PartitionPtr p(raw);
      check(bsom_partition_save(p.get(), out.c_str()), "writing " + out);
      if (!boundaries_path.empty()) {
        char* csv = nullptr;
        check(bsom_boundaries_csv(map.get(), normalize ? 1 : 0, &csv), "boundaries");
        emit(boundaries_path,
             provenance("baseline", {{"map", map_path}, {"normalize", normalize ? "true" : "false"}}) +
                 take_string(csv));
      }
      std::cout << "wrote " << out << " (" << bsom_partition_block_count(p.get()) << " blocks)\n";
    } else if (evaluate->parsed()) {
      auto map = load_map(map_path);
      auto p = load_partition(partition_path);
      auto dataset = load_dataset(data, label_col);
      char* report = nullptr;
      check(bsom_evaluate(p.get(), map.get(), dataset.get(),
                          format == "json" ? BSOM_FORMAT_JSON : BSOM_FORMAT_TEXT, nullptr, &report),
            "evaluating");
      std::string text = take_string(report);
      if (format == "text")
        text = provenance("evaluate", {{"map", map_path}, {"partition", partition_path}, {"data", data}}) + text;
      emit(out, text);
    } else if (sweep->parsed()) {
      auto map = load_map(map_path);
      const auto settings = cost.resolve();
      char* csv = nullptr;
      double span_r = 0.0, span_s = 0.0;
      check(bsom_sweep(map.get(), &settings, &spec, &csv, &span_r, &span_s), "sweeping");
      auto echo = cost.echo();
      echo.insert(echo.begin(), {"map", map_path});
      emit(out, provenance("sweep", echo) + take_string(csv));
      std::cout << "stable span: f_R x" << fmt(span_r) << ", f_sigma x" << fmt(span_s) << "\n";
    } else if (render->parsed()) {
      auto map = load_map(map_path);
      PartitionPtr p;
      if (!partition_path.empty()) p = load_partition(partition_path);
      DatasetPtr dataset;
      if (!data.empty()) dataset = load_dataset(data, label_col);
      char* text = nullptr;
      check(bsom_render_map(map.get(), p.get(), dataset.get(), &text), "rendering");
      emit(out, take_string(text));
    }
  } catch (const CliError& e) {
    std::cerr << "bsom: " << e.message << "\n";
    return 1;
  }
  return 0;
}
