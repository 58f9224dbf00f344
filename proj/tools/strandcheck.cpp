#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "strandcheck/descent.hpp"
#include "strandcheck/finmodel.hpp"
#include "strandcheck/render.hpp"
#include "strandcheck/text.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2;

struct Globals {
  bool json = false;
  bool verbose = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

std::uint64_t seed_or(const Globals& g, std::uint64_t dflt) { return g.seed_set ? g.seed : dflt; }

void write_atomic(const std::string& path, const std::string& data) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) sc::fail(sc::ErrorCode::IOError, "cannot write " + tmp);
    out << data;
    if (!out) sc::fail(sc::ErrorCode::IOError, "write to " + tmp + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) sc::fail(sc::ErrorCode::IOError, "cannot move " + tmp + " to " + path);
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(in))
        if (e.is_regular_file() && e.path().extension() == ".strand") found.push_back(e.path());
      std::sort(found.begin(), found.end());
      if (found.empty()) sc::fail(sc::ErrorCode::IOError, "no .strand files in " + in);
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(in);
    }
  }
  return files;
}

json report_json(const sc::CheckReport& r) {
  json j;
  j["script"] = r.script;
  j["verdict"] = sc::verdict_name(r.verdict);
  if (r.verdict != sc::Verdict::Verified) {
    j["failed_step"] = r.failed_step < 0 ? json("claim") : json(r.failed_step + 1);
    if (r.error) j["error"] = sc::error_code_name(*r.error);
    j["reason"] = r.reason;
  }
  j["steps_checked"] = r.steps_checked;
  j["rules_used"] = r.rules_used;
  j["seconds"] = r.seconds;
  return j;
}

void print_reports(const std::vector<sc::CheckReport>& reps, bool verbose) {
  for (const auto& r : reps) {
    std::cout << sc::verdict_name(r.verdict) << "  " << r.script;
    if (r.verdict == sc::Verdict::Verified) {
      std::cout << "  (" << r.steps_checked << " steps)";
    } else {
      std::cout << "  " << r.reason;
    }
    std::cout << "\n";
    if (verbose)
      for (const auto& [k, v] : r.rules_used) std::cout << "    " << k << " x" << v << "\n";
  }
}

int cmd_check(const Globals& g, const std::vector<std::string>& inputs) {
  std::vector<sc::ProofScript> scripts;
  std::set<std::string> names;
  for (const auto& file : expand_inputs(inputs)) {
    sc::ScriptFile f = sc::read_script_file(file);
    for (auto& s : f.scripts) {
      if (!names.insert(s.name).second)
        sc::fail(sc::ErrorCode::ParseError, "script " + s.name + " is defined twice");
      scripts.push_back(std::move(s));
    }
  }
  sc::Session session;
  auto reps = sc::check_all(scripts, session);
  bool ok = std::all_of(reps.begin(), reps.end(),
                        [](const sc::CheckReport& r) { return r.verdict == sc::Verdict::Verified; });
  if (g.json) {
    json j;
    j["scripts"] = json::array();
    for (const auto& r : reps) j["scripts"].push_back(report_json(r));
    j["ok"] = ok;
    std::cout << j.dump(2) << "\n";
  } else {
    print_reports(reps, g.verbose);
  }
  return ok ? kOk : kFailed;
}

struct OracleFlags {
  std::size_t instances = 100;
  std::size_t max_size = 4;
  std::size_t max_fiber = 3;
};

int cmd_verify(const Globals& g, bool skip_oracle, const OracleFlags& of,
               const std::vector<std::string>& disable, const std::vector<std::string>& unmark) {
  sc::TheoremOptions opt;
  opt.disabled_axioms.insert(disable.begin(), disable.end());
  opt.unmarked_squares.insert(unmark.begin(), unmark.end());
  auto t0 = std::chrono::steady_clock::now();
  sc::TheoremReport rep = sc::verify_theorem(opt);
  bool ok = rep.ok();
  json oracle = json::object();
  std::size_t oracle_pass = 0, oracle_run = 0;
  bool oracle_skipped = skip_oracle || of.instances == 0;
  if (!skip_oracle && of.instances == 0)
    std::cerr << "warning: --instances 0, semantic oracle skipped\n";
  if (!oracle_skipped) {
    std::uint64_t seed = seed_or(g, 7);
    for (const auto& s : sc::bundled_scripts()) {
      auto it = std::find_if(rep.reports.begin(), rep.reports.end(),
                             [&](const sc::CheckReport& r) { return r.script == s.name; });
      if (it == rep.reports.end() || it->verdict != sc::Verdict::Verified) continue;
      sc::OracleReport o = sc::oracle_equal(s.sig, s.lhs, s.rhs, of.instances, of.max_size, seed,
                                            of.max_fiber);
      ++oracle_run;
      if (o.equal()) ++oracle_pass;
      oracle[s.name] = {{"samples", o.samples}, {"mismatches", o.mismatches}};
      if (!o.equal()) oracle[s.name]["first_mismatch"] = o.message;
    }
    ok = ok && oracle_pass == oracle_run;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (g.json) {
    json j;
    j["scripts"] = json::array();
    for (const auto& r : rep.reports) j["scripts"].push_back(report_json(r));
    j["verified"] = rep.verified;
    j["total"] = rep.reports.size();
    if (!oracle_skipped) {
      j["oracle"] = oracle;
      j["oracle_pass"] = oracle_pass;
    } else {
      j["oracle"] = nullptr;
    }
    j["seconds"] = secs;
    j["ok"] = ok;
    std::cout << j.dump(2) << "\n";
  } else {
    print_reports(rep.reports, g.verbose);
    std::cout << rep.verified << "/" << rep.reports.size() << " scripts verified";
    if (!oracle_skipped) std::cout << ", oracle " << oracle_pass << "/" << oracle_run;
    std::cout << " in " << secs << " s\n";
  }
  return ok ? kOk : kFailed;
}

int cmd_export(const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& s : sc::bundled_scripts()) {
    sc::ScriptFile f = sc::script_file_for({s});
    write_atomic((fs::path(dir) / (s.name + ".strand")).string(), sc::print_script_file(f));
  }
  std::cout << "wrote " << sc::bundled_scripts().size() << " scripts to " << dir << "\n";
  return kOk;
}

struct Located {
  sc::Signature sig;
  sc::Diagram diagram;
};

Located locate(const std::string& file, const std::string& name) {
  if (file.empty()) {
    static const sc::ScriptFile bundle = sc::script_file_for(sc::bundled_scripts());
    const sc::NamedDiagram* d = bundle.find_diagram(name);
    if (!d) sc::fail(sc::ErrorCode::UnknownName, "no bundled diagram " + name);
    return {bundle.signature(d->extension), d->diagram};
  }
  sc::ScriptFile f = sc::read_script_file(file);
  const sc::NamedDiagram* d = f.find_diagram(name);
  if (!d) sc::fail(sc::ErrorCode::UnknownName, "no diagram " + name + " in " + file);
  return {f.signature(d->extension), d->diagram};
}

int cmd_normalize(const Globals& g, const std::string& file, const std::string& name) {
  Located l = locate(file, name);
  sc::Diagram out;
  const char* kind;
  if (sc::is_pure_chi(l.diagram)) {
    out = sc::exchange_canonical(l.sig, sc::normalize_fib(l.sig, l.diagram));
    kind = "normal-form";
  } else {
    out = sc::exchange_canonical(l.sig, l.diagram);
    kind = "exchange-canonical";
  }
  if (g.json) {
    json j;
    j["diagram"] = name;
    j["kind"] = kind;
    j["layers"] = json::array();
    for (const auto& ly : out.layers)
      j["layers"].push_back({{"strand", ly.left.size()}, {"generator", ly.gen.str()}});
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "# " << kind << "\n"
              << sc::print_diagram_block(name + ".normal", l.sig.extension, out);
  }
  return kOk;
}

int cmd_render(const std::string& file, const std::string& name, const std::string& format,
               const std::string& out, bool expand) {
  Located l = locate(file, name);
  sc::Diagram d = expand ? sc::expand_all(l.sig, l.diagram) : l.diagram;
  std::string text = sc::render(l.sig, d, sc::render_format_from_name(format), name);
  if (out.empty() || out == "-") std::cout << text;
  else write_atomic(out, text);
  return kOk;
}

int cmd_probe(const Globals& g, std::size_t size, std::size_t max_path, std::size_t samples,
              bool inject) {
  if (samples == 0) std::cerr << "warning: --samples 0, probe is vacuous\n";
  sc::Signature sig = sc::descent_signature(sc::Extension::None);
  sc::RandomFibOptions opt;
  opt.max_layers = size;
  opt.max_path_len = max_path;
  std::function<std::vector<sc::Diagram>(const sc::Diagram&)> hook;
  if (inject) {
    // A non-rule move: drop the last layer of any diagram with two or more layers.
    hook = [sig](const sc::Diagram& d) {
      std::vector<sc::Diagram> out;
      if (d.layers.size() >= 2) {
        sc::Diagram r = sc::identity_diagram(d.source);
        for (std::size_t i = 0; i + 1 < d.layers.size(); ++i)
          sc::push_layer(sig, r, d.layers[i].gen, d.layers[i].left.size());
        out.push_back(r);
      }
      return out;
    };
  }
  sc::ProbeReport rep = sc::confluence_probe(sig, opt, samples, seed_or(g, 42), hook);
  if (g.json) {
    json j;
    j["samples"] = rep.samples;
    j["violations"] = rep.violations;
    j["states_explored"] = rep.states_explored;
    j["messages"] = rep.messages;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << rep.samples << " samples, " << rep.states_explored << " states, "
              << rep.violations << " violations\n";
    std::size_t shown = 0;
    for (const auto& m : rep.messages) {
      if (!g.verbose && ++shown > 5) break;
      std::cout << "  " << m << "\n";
    }
  }
  return rep.violations == 0 ? kOk : kFailed;
}

int cmd_model_check(const Globals& g, const std::vector<std::string>& inputs,
                    const OracleFlags& of) {
  if (of.instances == 0) std::cerr << "warning: --instances 0, oracle is vacuous\n";
  std::vector<sc::ProofScript> scripts;
  if (inputs.empty()) {
    scripts = sc::bundled_scripts();
  } else {
    for (const auto& file : expand_inputs(inputs)) {
      sc::ScriptFile f = sc::read_script_file(file);
      scripts.insert(scripts.end(), f.scripts.begin(), f.scripts.end());
    }
  }
  std::uint64_t seed = seed_or(g, 7);
  json j = json::object();
  std::size_t bad = 0;
  for (const auto& s : scripts) {
    sc::OracleReport o =
        sc::oracle_equal(s.sig, s.lhs, s.rhs, of.instances, of.max_size, seed, of.max_fiber);
    if (!o.equal()) ++bad;
    j[s.name] = {{"samples", o.samples}, {"mismatches", o.mismatches}};
    if (!g.json)
      std::cout << (o.equal() ? "equal    " : "UNEQUAL  ") << s.name << "  (" << o.samples
                << " samples" << (o.equal() ? "" : ", " + o.message) << ")\n";
  }
  if (g.json) std::cout << json{{"claims", j}, {"unequal", bad}}.dump(2) << "\n";
  return bad == 0 ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strandcheck: string-diagram proof checker for bifibrations"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable report on stdout");
  app.add_flag("--verbose", g.verbose, "More detail");
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed");

  std::vector<std::string> inputs;
  auto* check = app.add_subcommand("check", "Check every script in the given files or directories");
  check->add_option("inputs", inputs, "Script files or directories")->required();

  bool skip_oracle = false;
  OracleFlags of;
  std::vector<std::string> disable, unmark;
  auto* verify = app.add_subcommand("verify-benabou-roubaud",
                                    "Verify the bundled derivations and sweep the semantic oracle");
  verify->add_flag("--skip-oracle", skip_oracle, "Syntactic check only");
  verify->add_option("--instances", of.instances, "Oracle instances per claim");
  verify->add_option("--max-size", of.max_size, "Largest |A| and |B| in sampled instances");
  verify->add_option("--max-fiber", of.max_fiber, "Largest sampled fiber");
  verify->add_option("--disable-axiom", disable, "Treat an axiom as unavailable");
  verify->add_option("--unmark-square", unmark, "Drop a square from the marked pullbacks");

  std::string dir;
  auto* exp = app.add_subcommand("export-bundle", "Write the bundled scripts as .strand files");
  exp->add_option("dir", dir, "Output directory")->required();

  std::string file, name, format = "svg", out;
  bool expand = false;
  auto* norm = app.add_subcommand("normalize", "Normal form of a diagram");
  norm->add_option("diagram", name, "Diagram name")->required();
  norm->add_option("--file", file, "Script file (default: the bundled derivations)");
  auto* rend = app.add_subcommand("render", "Render a diagram to SVG or TikZ");
  rend->add_option("diagram", name, "Diagram name")->required();
  rend->add_option("--file", file, "Script file (default: the bundled derivations)");
  rend->add_option("--format", format, "svg or tikz")->check(CLI::IsMember({"svg", "tikz"}));
  rend->add_option("-o,--out", out, "Output path (default stdout)");
  rend->add_flag("--expand", expand, "Unfold macro boxes first");

  std::size_t size = 5, max_path = 4, samples = 1000;
  bool inject = false;
  auto* probe = app.add_subcommand("probe-confluence", "Sample the oriented chi rewriting system");
  probe->add_option("--size", size, "Largest number of layers");
  probe->add_option("--max-path", max_path, "Longest base path");
  probe->add_option("--samples", samples, "Number of random diagrams");
  probe->add_flag("--inject-bad-rule", inject, "Add a non-rule move (negative control)");

  std::vector<std::string> mc_inputs;
  auto* model = app.add_subcommand("model-check", "Compare claim sides in the finite-set model");
  model->add_option("inputs", mc_inputs, "Script files or directories (default: bundled)");
  model->add_option("--instances", of.instances, "Instances per claim");
  model->add_option("--max-size", of.max_size, "Largest |A| and |B|");
  model->add_option("--max-fiber", of.max_fiber, "Largest sampled fiber");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  g.seed_set = seed_opt->count() > 0;

  try {
    if (*check) return cmd_check(g, inputs);
    if (*verify) return cmd_verify(g, skip_oracle, of, disable, unmark);
    if (*exp) return cmd_export(dir);
    if (*norm) return cmd_normalize(g, file, name);
    if (*rend) return cmd_render(file, name, format, out, expand);
    if (*probe) return cmd_probe(g, size, max_path, samples, inject);
    if (*model) return cmd_model_check(g, mc_inputs, of);
  } catch (const sc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
