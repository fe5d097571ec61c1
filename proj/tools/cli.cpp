#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <variant>

#include "machina/gauge_family.hpp"
#include "machina/catalog.hpp"
#include "machina/error.hpp"
#include "machina/format.hpp"
#include "machina/hmm.hpp"
#include "machina/majorization.hpp"
#include "machina/minimize.hpp"
#include "machina/quantum.hpp"

namespace machina::cli {

namespace {

using Source = std::variant<FinitePredictiveModel, PureStateQuantumModel, Distribution>;

struct LoadedSource {
  std::string name;
  Source value;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Table, Csv };

double comparison_tol() {
  if (const char* env = std::getenv("MACHINA_TOL")) {
    double v = 0.0;
    if (parse_number(env, v) && v >= 0.0) return v;
    throw UsageError("MACHINA_TOL must be a nonnegative number");
  }
  return kCompareTol;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

// The value of the first "model:" line, ignoring comments.
std::string model_kind(const std::string& text) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string key, value;
    fields >> key >> value;
    if (key.empty()) continue;
    if (key == "model:") return value;
    if (key == "model" && value == ":") fields >> value;
    return key == "model" ? value : std::string{};
  }
  return {};
}

Source load_text(const std::string& text) {
  const std::string kind = model_kind(text);
  if (kind == "quantum") return parse_quantum_model(text);
  if (kind == "classical") return parse_model(text);
  throw Error(ErrorCode::SyntaxError, "file must start with 'model: classical' or 'model: quantum'", 1);
}

LoadedSource load_source(const std::string& spec) {
  if (spec.rfind("process:", 0) == 0) {
    const std::string name = spec.substr(8);
    return {name, std::visit([](auto&& m) -> Source { return m; }, catalog::lookup(name))};
  }
  if (spec.rfind("dist:", 0) == 0) {
    std::vector<double> values;
    std::stringstream ss(spec.substr(5));
    for (std::string tok; std::getline(ss, tok, ',');) {
      double v = 0.0;
      if (!parse_number(tok, v)) throw UsageError("bad distribution entry '" + tok + "'");
      values.push_back(v);
    }
    try {
      return {spec, Distribution::validate(values)};
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  return {spec, load_text(read_file(spec))};
}

std::vector<LoadedSource> collect_sources(const std::vector<std::string>& positional,
                                          const std::vector<std::string>& processes) {
  std::vector<LoadedSource> out;
  for (const auto& p : positional) out.push_back(load_source(p));
  for (const auto& p : processes) out.push_back(load_source("process:" + p));
  return out;
}

LoadedSource single_source(const std::vector<std::string>& positional, const std::vector<std::string>& processes) {
  auto all = collect_sources(positional, processes);
  if (all.size() != 1) throw UsageError("expected exactly one model (path or --process)");
  return std::move(all.front());
}

const FinitePredictiveModel& require_classical(const LoadedSource& s) {
  if (const auto* m = std::get_if<FinitePredictiveModel>(&s.value)) return *m;
  throw UsageError("'" + s.name + "' is not a classical model");
}

Distribution distribution_of(const Source& s) {
  if (const auto* m = std::get_if<FinitePredictiveModel>(&s)) return stationary(*m);
  if (const auto* q = std::get_if<PureStateQuantumModel>(&s)) return stationary_spectrum(*q);
  return std::get<Distribution>(s);
}

std::string num(double v, Format f) { return format_number(v, f == Format::Csv ? 12 : 6); }

std::string alpha_label(double alpha) { return std::isinf(alpha) ? "inf" : format_number(alpha, 6); }

// Left-aligned columns padded to the widest cell.
void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], r[c].size());
    }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
    }
    out << line << "\n";
  }
}

void print_csv(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
    out << "\n";
  }
}

void emit(std::ostream& out, Format f, const std::vector<std::vector<std::string>>& rows) {
  if (f == Format::Csv)
    print_csv(out, rows);
  else
    print_table(out, rows);
}

std::string dist_string(const Distribution& d, Format f) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? ", " : "") + num(d[i], f);
  return s + ")";
}

std::vector<double> parse_alphas(const std::vector<std::string>& raw) {
  if (raw.empty()) return standard_alphas();
  std::vector<double> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    for (std::string tok; std::getline(ss, tok, ',');) {
      double v = 0.0;
      if (!parse_number(tok, v) || v < 0.0) throw UsageError("alpha must be a nonnegative number or inf");
      out.push_back(v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_validate(const LoadedSource& src, std::ostream& out) {
  if (const auto* m = std::get_if<FinitePredictiveModel>(&src.value)) {
    out << "classical model '" << src.name << "': " << m->num_states() << " states, " << m->num_symbols()
        << " symbols\n";
    out << "  row-stochastic: yes\n  unifilar: yes\n  irreducible: yes\n";
    out << "  epsilon-machine: " << (is_epsilon_machine(*m) ? "yes" : "no") << "\n";
    out << "  stationary: " << dist_string(stationary(*m), Format::Table) << "\n";
    return kOk;
  }
  if (const auto* q = std::get_if<PureStateQuantumModel>(&src.value)) {
    out << "quantum model '" << src.name << "': dim " << q->dim() << ", " << q->num_states() << " states, "
        << q->num_symbols() << " symbols\n";
    out << "  completeness residual: " << format_number(completeness_residual(q->kraus()), 3) << "\n";
    classical_equivalent(*q);
    out << "  unifilar: yes (successors unique up to phase)\n";
    return kOk;
  }
  out << "distribution '" << src.name << "': valid\n";
  return kOk;
}

int cmd_entropy(const LoadedSource& src, const std::vector<double>& alphas, Format f, std::ostream& out) {
  const Distribution d = distribution_of(src.value);
  const bool quantum = std::holds_alternative<PureStateQuantumModel>(src.value);
  std::vector<std::vector<std::string>> rows{{"alpha", quantum ? "S_alpha" : "H_alpha"}};
  for (double a : alphas) rows.push_back({alpha_label(a), num(renyi_entropy(d, a), f)});
  emit(out, f, rows);
  return kOk;
}

int cmd_lorenz(const std::vector<LoadedSource>& srcs, Format f, double tol, std::ostream& out) {
  if (srcs.size() != 2) throw UsageError("lorenz needs exactly two inputs");
  const Distribution a = distribution_of(srcs[0].value);
  const Distribution b = distribution_of(srcs[1].value);
  const auto ca = lorenz_curve(a);
  const auto cb = lorenz_curve(b);
  const Verdict v = compare(a, b, tol);
  if (f == Format::Csv) {
    out << lorenz_csv(ca) << "\n" << lorenz_csv(cb) << "\nverdict," << to_string(v) << "\n";
    return kOk;
  }
  const std::size_t n = std::max(ca.size(), cb.size());
  std::vector<std::vector<std::string>> rows{{"k", srcs[0].name, srcs[1].name}};
  for (std::size_t k = 0; k < n; ++k)
    rows.push_back({std::to_string(k), num(k < ca.size() ? ca[k].cum : 1.0, f), num(k < cb.size() ? cb[k].cum : 1.0, f)});
  print_table(out, rows);
  out << "verdict: " << srcs[0].name << " " << to_string(v) << " " << srcs[1].name << "\n";
  return kOk;
}

int cmd_compare(const std::vector<LoadedSource>& srcs, Format f, double tol, std::ostream& out) {
  if (srcs.size() != 2) throw UsageError("compare needs exactly two inputs");
  const Distribution a = distribution_of(srcs[0].value);
  const Distribution b = distribution_of(srcs[1].value);
  const Verdict v = compare(a, b, tol);
  std::vector<std::vector<std::string>> rows{{"alpha", srcs[0].name, srcs[1].name}};
  for (double alpha : standard_alphas())
    rows.push_back({alpha_label(alpha), num(renyi_entropy(a, alpha), f), num(renyi_entropy(b, alpha), f)});
  if (f == Format::Csv) {
    print_csv(out, rows);
    out << "verdict," << to_string(v) << "\n";
  } else {
    out << srcs[0].name << ": " << dist_string(a, f) << "\n" << srcs[1].name << ": " << dist_string(b, f) << "\n";
    print_table(out, rows);
    out << "verdict: " << srcs[0].name << " " << to_string(v) << " " << srcs[1].name << "\n";
  }
  return kOk;
}

void print_entropy_rows(std::ostream& out, Format f, const std::vector<EntropyRow>& rows, const std::string& ref,
                        const std::string& other) {
  std::vector<std::vector<std::string>> table{{"alpha", ref, other}};
  for (const auto& r : rows) table.push_back({alpha_label(r.alpha), num(r.reference, f), num(r.other, f)});
  emit(out, f, table);
}

int cmd_epsilonize(const LoadedSource& src, const std::string& out_path, Format f, double tol, std::ostream& out) {
  const auto& m = require_classical(src);
  const auto report = strong_minimality_report(m, tol);
  if (!out_path.empty()) write_file(out_path, serialize_model(report.machine));
  if (f == Format::Csv) {
    std::vector<std::vector<std::string>> rows{{"state", "block"}};
    for (std::size_t s = 0; s < m.num_states(); ++s)
      rows.push_back({m.states()[s], report.machine.states()[report.partition.block_of[s]]});
    print_csv(out, rows);
    out << "\n";
    print_entropy_rows(out, f, report.entropies, "H_machine", "H_model");
    out << "\nverdict," << to_string(report.verdict) << "\n";
    return report.holds() ? kOk : kCheckFailed;
  }
  if (report.partition.all_singletons())
    out << "note: input is already an epsilon-machine (" << m.num_states() << " states)\n";
  else
    out << "merged " << m.num_states() << " states into " << report.machine.num_states() << "\n";
  for (const auto& block : report.partition.blocks) {
    out << "  " << report.machine.states()[report.partition.block_of[block.front()]] << " <- {";
    for (std::size_t i = 0; i < block.size(); ++i) out << (i ? ", " : "") << m.states()[block[i]];
    out << "}\n";
  }
  out << "pi(machine) = " << dist_string(report.machine_pi, f) << "\n";
  out << "pi(model)   = " << dist_string(report.model_pi, f) << "\n";
  print_entropy_rows(out, f, report.entropies, "H_machine", "H_model");
  out << "verdict: machine " << to_string(report.verdict) << " model -> strong minimality "
      << (report.holds() ? "holds" : "VIOLATED") << "\n";
  if (out_path.empty()) out << "\n" << serialize_model(report.machine);
  return report.holds() ? kOk : kCheckFailed;
}

int cmd_qmachine(const LoadedSource& src, const std::string& out_path, Format f, double tol, std::ostream& out,
                 std::ostream& err) {
  const auto& m = require_classical(src);
  std::vector<std::string> warnings;
  const auto gram = gram_fixed_point(m);
  const auto q = build_qmachine(m, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  if (!out_path.empty()) write_file(out_path, serialize_quantum_model(q));

  // The q-machine's classical equivalent is the input model itself.
  const Distribution pi = stationary(m);
  const Distribution lambda = spectrum(stationary_density(q, pi), m.num_states());
  const Verdict v = compare(lambda, pi, tol);
  std::vector<EntropyRow> rows;
  for (double a : standard_alphas()) rows.push_back({a, renyi_entropy(lambda, a), renyi_entropy(pi, a)});
  const bool holds = v == Verdict::StrictlyMajorizes || v == Verdict::Equivalent;

  if (f == Format::Table) {
    out << "q-machine of '" << src.name << "': dim " << q.dim() << " (" << m.num_states() << " states), Gram converged in "
        << gram.iterations << " iterations\nGram matrix:\n";
  }
  std::vector<std::vector<std::string>> g;
  for (std::size_t i = 0; i < gram.gram.size(); ++i) {
    std::vector<std::string> row;
    for (std::size_t j = 0; j < gram.gram.size(); ++j) row.push_back(num(gram.gram(i, j).real(), f));
    g.push_back(std::move(row));
  }
  emit(out, f, g);
  if (f == Format::Table) {
    out << "spectrum     = " << dist_string(lambda, f) << "\n";
    out << "pi(classical)= " << dist_string(pi, f) << "\n";
  } else {
    out << "\n";
  }
  print_entropy_rows(out, f, rows, "S_alpha", "H_alpha");
  if (f == Format::Csv)
    out << "\nverdict," << to_string(v) << "\n";
  else
    out << "verdict: spectrum " << to_string(v) << " pi -> strong quantum advantage "
        << (holds ? "holds" : "VIOLATED") << "\n";
  if (f == Format::Table && out_path.empty()) out << "\n" << serialize_quantum_model(q);
  return holds ? kOk : kCheckFailed;
}

int cmd_counterexample(std::size_t grid, Format f, std::ostream& out) {
  if (grid < 100) throw UsageError("--grid must be at least 100");
  const auto rep = gauge::counterexample_report(grid);
  if (f == Format::Csv) {
    out << gauge::sweep_csv(rep.sweep);
    return rep.pass ? kOk : kCheckFailed;
  }
  for (const auto& line : rep.lines) out << line << "\n";
  out << (rep.pass ? "PASS" : "FAIL") << "\n";
  return rep.pass ? kOk : kCheckFailed;
}

int cmd_wordprob(const LoadedSource& src, const std::string& word, std::size_t max_len, Format f, std::ostream& out) {
  const auto* cm = std::get_if<FinitePredictiveModel>(&src.value);
  const auto* qm = std::get_if<PureStateQuantumModel>(&src.value);
  if (!cm && !qm) throw UsageError("wordprob needs a model");

  std::optional<FinitePredictiveModel> classical;
  std::optional<ComplexMatrix> rho;
  if (qm) {
    classical = classical_equivalent(*qm);
    rho = stationary_density(*qm, stationary(*classical));
  }
  const FinitePredictiveModel& model = cm ? *cm : *classical;
  const Distribution pi = stationary(model);

  auto row_for = [&](const Word& w, double& delta) {
    const double pc = word_probability(model, w, pi);
    std::vector<std::string> row{format_word(model.alphabet(), w)};
    if (qm) {
      const double pq = quantum_word_probability(*qm, w, *rho);
      delta = std::max(delta, std::abs(pq - pc));
      row.push_back(num(pq, f));
      row.push_back(num(pc, f));
    } else {
      row.push_back(num(pc, f));
    }
    return row;
  };

  std::vector<std::vector<std::string>> rows;
  rows.push_back(qm ? std::vector<std::string>{"word", "quantum", "classical"}
                    : std::vector<std::string>{"word", "probability"});
  double delta = 0.0;
  if (!word.empty()) {
    rows.push_back(row_for(parse_word(model, word), delta));
  } else {
    for (const auto& w : all_words(model.num_symbols(), max_len)) rows.push_back(row_for(w, delta));
  }
  emit(out, f, rows);
  if (qm) {
    if (f == Format::Csv)
      out << "max_delta," << format_number(delta, 12) << "\n";
    else
      out << "max |quantum - classical| = " << format_number(delta, 3) << "\n";
  }
  return kOk;
}

int cmd_export(const LoadedSource& src, const std::string& out_path, std::ostream& out) {
  std::string text;
  if (const auto* m = std::get_if<FinitePredictiveModel>(&src.value))
    text = serialize_model(*m);
  else if (const auto* q = std::get_if<PureStateQuantumModel>(&src.value))
    text = serialize_quantum_model(*q);
  else
    throw UsageError("only models can be exported");
  if (out_path.empty())
    out << text;
  else
    write_file(out_path, text);
  return kOk;
}

// "A:0=0,B:0=1" -> route entries.
std::vector<RouteEntry> parse_routes(const std::string& spec) {
  std::vector<RouteEntry> out;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto colon = item.find(':');
    const auto eq = item.find('=');
    if (colon == std::string::npos || eq == std::string::npos || eq < colon)
      throw UsageError("route '" + item + "' must look like source:symbol=copy");
    double copy = 0;
    if (!parse_number(item.substr(eq + 1), copy) || copy < 0 || copy != std::floor(copy))
      throw UsageError("route copy index must be a nonnegative integer");
    out.push_back({item.substr(0, colon), item.substr(colon + 1, eq - colon - 1), static_cast<std::size_t>(copy)});
  }
  return out;
}

int cmd_split(const LoadedSource& src, const std::string& state, std::size_t copies, const std::string& routes,
              const std::string& names, const std::string& out_path, std::ostream& out) {
  const auto& m = require_classical(src);
  std::vector<std::string> copy_names;
  std::stringstream ss(names);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) copy_names.push_back(tok);
  const auto split = split_state(m, state, copies, parse_routes(routes), copy_names);
  if (out_path.empty())
    out << serialize_model(split);
  else
    write_file(out_path, serialize_model(split));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"machina: majorization analysis of classical and quantum process models", "machina"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::vector<std::string> positional, processes, alpha_raw;
  std::string out_path, word, format = "table", split_state_name, routes, copy_names;
  std::size_t max_len = 3, grid = 10'000, copies = 2;

  auto add_sources = [&](CLI::App* sub, bool many) {
    sub->add_option("inputs", positional,
                    many ? "Model files, process:NAME[:param], or dist:p1,p2,..." : "Model file or process:NAME");
    sub->add_option("--process", processes, "Catalog process name[:param]");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv"}));
  };

  auto* validate = app.add_subcommand("validate", "Parse and check a model file");
  add_sources(validate, false);
  auto* entropy = app.add_subcommand("entropy", "Renyi memory H_alpha / S_alpha of a model");
  add_sources(entropy, false);
  entropy->add_option("--alpha", alpha_raw, "Orders (comma separated; 'inf' allowed)");
  add_format(entropy);
  auto* lorenz = app.add_subcommand("lorenz", "Lorenz curves of two models and their majorization verdict");
  add_sources(lorenz, true);
  add_format(lorenz);
  auto* comp = app.add_subcommand("compare", "Majorization verdict and entropy table for two inputs");
  add_sources(comp, true);
  add_format(comp);
  auto* epsilonize = app.add_subcommand("epsilonize", "Merge equivalent states into the epsilon-machine");
  add_sources(epsilonize, false);
  epsilonize->add_option("--out", out_path, "Write the merged model here");
  add_format(epsilonize);
  auto* qmachine = app.add_subcommand("qmachine", "Build the q-machine of a classical model");
  add_sources(qmachine, false);
  qmachine->add_option("--out", out_path, "Write the quantum model here");
  add_format(qmachine);
  auto* counter = app.add_subcommand("counterexample", "Uniqueness sweep and weak-minimality argument for D3");
  counter->add_option("--grid", grid, "Grid points per sign of theta");
  add_format(counter);
  auto* wordprob = app.add_subcommand("wordprob", "Word probabilities");
  add_sources(wordprob, false);
  wordprob->add_option("--word", word, "Single word (characters or space separated symbols)");
  wordprob->add_option("--max-len", max_len, "Tabulate all words of this length");
  add_format(wordprob);
  auto* exporter = app.add_subcommand("export", "Write a model (e.g. a catalog process) in file format");
  add_sources(exporter, false);
  exporter->add_option("--out", out_path, "Destination file (stdout if omitted)");
  auto* splitter = app.add_subcommand("split", "Split a state into probabilistically equivalent copies");
  add_sources(splitter, false);
  splitter->add_option("--state", split_state_name, "State to split")->required();
  splitter->add_option("--copies", copies, "Number of copies");
  splitter->add_option("--route", routes, "Incoming edge routing, e.g. A:0=0,B:0=1")->required();
  splitter->add_option("--names", copy_names, "Comma separated copy names");
  splitter->add_option("--out", out_path, "Destination file (stdout if omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  const Format fmt = format == "csv" ? Format::Csv : Format::Table;
  try {
    const double tol = comparison_tol();
    if (validate->parsed()) return cmd_validate(single_source(positional, processes), out);
    if (entropy->parsed()) return cmd_entropy(single_source(positional, processes), parse_alphas(alpha_raw), fmt, out);
    if (lorenz->parsed()) return cmd_lorenz(collect_sources(positional, processes), fmt, tol, out);
    if (comp->parsed()) return cmd_compare(collect_sources(positional, processes), fmt, tol, out);
    if (epsilonize->parsed()) return cmd_epsilonize(single_source(positional, processes), out_path, fmt, tol, out);
    if (qmachine->parsed())
      return cmd_qmachine(single_source(positional, processes), out_path, fmt, tol, out, err);
    if (counter->parsed()) return cmd_counterexample(grid, fmt, out);
    if (wordprob->parsed()) {
      if (!word.empty() && wordprob->count("--max-len") > 0) throw UsageError("use either --word or --max-len");
      return cmd_wordprob(single_source(positional, processes), word, max_len, fmt, out);
    }
    if (exporter->parsed()) return cmd_export(single_source(positional, processes), out_path, out);
    if (splitter->parsed())
      return cmd_split(single_source(positional, processes), split_state_name, copies, routes, copy_names, out_path,
                       out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_parse_error(e.code()) ? kUsage : kCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace machina::cli
