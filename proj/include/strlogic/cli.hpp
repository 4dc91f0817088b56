#ifndef STRLOGIC_CLI_HPP
#define STRLOGIC_CLI_HPP

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "automata.hpp"
#include "grammar.hpp"
#include "groupoid.hpp"
#include "languages.hpp"
#include "nivat.hpp"
#include "parser.hpp"
#include "semantics.hpp"
#include "transducer.hpp"
#include "witnesses.hpp"

namespace strlogic::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* schema = "strlogic/1";

enum Exit { Ok = 0, Negative = 1, Usage = 2, Input = 3 };

class InputError : public Error {
public:
  using Error::Error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

inline std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && ws(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

inline Assignment parse_assignment(const std::string& text) {
  Assignment a;
  for (const auto& item : split(text, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("assignment '" + item + "' is not of the form var=position");
    try {
      a[trim(item.substr(0, eq))] = std::stoi(item.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw InputError("assignment '" + item + "' has no integer position");
    }
  }
  return a;
}

// Letters of `word` in order of first appearance.
inline Alphabet alphabet_of(const std::string& word) {
  std::string symbols;
  for (char c : word)
    if (symbols.find(c) == std::string::npos) symbols += c;
  if (symbols.empty()) throw InputError("cannot infer an alphabet from an empty word");
  return Alphabet(symbols);
}

inline std::optional<LanguageRef> builtin_language_ci(std::string name) {
  if (auto l = builtin_language(name)) return l;
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "maj" || lower == "majority") return LanguageRef::named(NamedLanguage::Majority);
  if (lower == "eq01" || lower == "equalzeroone") return LanguageRef::named(NamedLanguage::EqualZeroOne);
  if (lower == "add" || lower == "additionhelper") return LanguageRef::named(NamedLanguage::AdditionHelper);
  for (int t = 1; t <= 4; ++t)
    if (lower == "dyck" + std::to_string(t)) return LanguageRef::named(NamedLanguage::Dyck, t);
  return std::nullopt;
}

// Shared --grammar NAME=FILE[:COFILE] and --groupoid NAME=FILE bindings.
struct LanguageFlags {
  std::vector<std::string> grammars, groupoids;

  void attach(CLI::App* cmd) {
    cmd->add_option("--grammar", grammars, "Bind Q[NAME] to a grammar file: NAME=FILE or NAME=FILE:COMPLEMENT");
    cmd->add_option("--groupoid", groupoids, "Bind Q[NAME] to a groupoid word problem: NAME=FILE");
  }

  LanguageEnv env() const {
    LanguageEnv env;
    auto binding = [](const std::string& spec) {
      auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) throw InputError("language binding '" + spec + "' is not NAME=FILE");
      return std::make_pair(spec.substr(0, eq), spec.substr(eq + 1));
    };
    for (const auto& spec : grammars) {
      auto [name, files] = binding(spec);
      auto colon = files.find(':');
      Grammar g = parse_grammar(read_file(files.substr(0, colon)));
      std::optional<Grammar> co;
      if (colon != std::string::npos) co = parse_grammar(read_file(files.substr(colon + 1)));
      env.add(grammar_language(name, std::move(g), std::move(co)));
    }
    for (const auto& spec : groupoids) {
      auto [name, file] = binding(spec);
      env.add(groupoid_language(name, parse_groupoid(read_file(file))));
    }
    return env;
  }
};

// A formula given inline (--text) or as a file (--formula) whose first line
// may declare the alphabet "(a,b)"; --sigma overrides both.
struct FormulaSource {
  std::string file, text, sigma;

  void attach(CLI::App* cmd, const char* file_flag = "-f,--formula") {
    cmd->add_option(file_flag, file, "Formula file (optional leading alphabet line such as (a,b))");
    cmd->add_option("-t,--text", text, "Formula text");
    cmd->add_option("--sigma", sigma, "Input alphabet, e.g. \"(a,b)\"");
  }

  std::pair<std::optional<Alphabet>, std::string> load() const {
    if (file.empty() == text.empty()) throw InputError("give exactly one of a formula file or --text");
    auto [header, body] = split_alphabet_header(file.empty() ? text : read_file(file));
    if (!sigma.empty()) header = Alphabet::parse(sigma);
    return {header, body};
  }

  Alphabet alphabet(const std::optional<Alphabet>& header, const std::string& word) const {
    if (header) return *header;
    if (!word.empty()) return alphabet_of(word);
    throw InputError("no alphabet: use --sigma or an alphabet line in the formula file");
  }
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json_output = false;
  int jobs = 1;
  std::uint64_t seed = 20240601;
  bool seeded = false;

  void emit(const std::string& command, json body, const std::string& text) {
    if (json_output) {
      json j{{"schema", schema}, {"command", command}};
      for (auto& [k, v] : body.items()) j[k] = v;
      out << j.dump(2) << '\n';
    } else {
      out << text;
      if (!text.empty() && text.back() != '\n') out << '\n';
    }
  }
};

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using detail::Context;
  CLI::App app{"strlogic: first-order logic over strings, Lindström quantifiers, automata and transducers"};
  app.name("strlogic");
  app.require_subcommand(1);
  Context ctx{out, err};
  app.add_flag("--json", ctx.json_output, "Machine-readable output")->configurable(false);
  app.add_option("--jobs", ctx.jobs, "Worker threads for parallel sweeps")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", ctx.seed, "Seed for randomized sweeps");
  app.fallthrough();

  int code = Exit::Ok;
  std::function<void()> action;

  // eval ---------------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "Decide w |= phi under an assignment");
  detail::FormulaSource eval_src;
  detail::LanguageFlags eval_langs;
  std::string eval_word, eval_assign;
  bool eval_complements = false;
  eval_src.attach(eval_cmd);
  eval_langs.attach(eval_cmd);
  eval_cmd->add_option("-w,--word", eval_word, "Input word")->required();
  eval_cmd->add_option("--assign", eval_assign, "Free variable positions, e.g. x=2,y=3");
  eval_cmd->add_flag("--check-complements", eval_complements, "Cross-check grammar languages against their complements");
  eval_cmd->callback([&] {
    action = [&] {
      auto [header, body] = eval_src.load();
      Alphabet sigma = eval_src.alphabet(header, eval_word);
      LanguageEnv env = eval_langs.env();
      Formula f = parse_formula(body, sigma, &env);
      Word w = Word::from_string(sigma, eval_word);
      const bool v = eval(f, w, detail::parse_assignment(eval_assign), {eval_complements});
      ctx.emit("eval", {{"word", eval_word}, {"result", v}}, detail::bool_text(v));
      code = v ? Exit::Ok : Exit::Negative;
    };
  });

  // transform ----------------------------------------------------------------
  auto* tr_cmd = app.add_subcommand("transform", "Apply the FO-translation defined by a body tuple");
  detail::FormulaSource tr_src;
  detail::LanguageFlags tr_langs;
  std::string tr_word, tr_assign, tr_target = "(1,0)", tr_vars = "x";
  tr_src.attach(tr_cmd, "-f,--bodies");
  tr_langs.attach(tr_cmd);
  tr_cmd->add_option("-w,--word", tr_word, "Input word")->required();
  tr_cmd->add_option("--target", tr_target, "Output alphabet; body i selects letter i, the last letter is the default")
      ->capture_default_str();
  tr_cmd->add_option("--vars", tr_vars, "Tuple variables, comma separated")->capture_default_str();
  tr_cmd->add_option("--assign", tr_assign, "Outer assignment for extra free variables");
  tr_cmd->callback([&] {
    action = [&] {
      auto [header, body] = tr_src.load();
      Alphabet sigma = tr_src.alphabet(header, tr_word);
      LanguageEnv env = tr_langs.env();
      TransformSpec spec{parse_formula_list(body, sigma, &env), detail::split(tr_vars, ','), Alphabet::parse(tr_target)};
      Word image = transform(spec, Word::from_string(sigma, tr_word), detail::parse_assignment(tr_assign));
      ctx.emit("transform", {{"word", tr_word}, {"image", image.to_string()}}, image.to_string());
    };
  });

  // cfl ----------------------------------------------------------------------
  auto* cfl_cmd = app.add_subcommand("cfl", "Context-free grammar utilities");
  std::string cfl_action, cfl_grammar, cfl_word;
  int cfl_max = 60;
  cfl_cmd->add_option("action", cfl_action, "member | normalize | lengths | fit | groupoid")
      ->required()
      ->check(CLI::IsMember({"member", "normalize", "lengths", "fit", "groupoid"}));
  cfl_cmd->add_option("-g,--grammar", cfl_grammar, "Grammar file")->required();
  cfl_cmd->add_option("-w,--word", cfl_word, "Word for member");
  cfl_cmd->add_option("--max", cfl_max, "Length bound for lengths/fit")->capture_default_str();
  cfl_cmd->callback([&] {
    action = [&] {
      Grammar g = parse_grammar(detail::read_file(cfl_grammar));
      if (cfl_action == "member") {
        const bool v = cyk_member(g, Word::from_string(g.terminals(), cfl_word));
        ctx.emit("cfl", {{"action", "member"}, {"word", cfl_word}, {"result", v}}, detail::bool_text(v));
        code = v ? Exit::Ok : Exit::Negative;
      } else if (cfl_action == "normalize") {
        ctx.emit("cfl", {{"action", "normalize"}, {"grammar", g.to_text()}}, g.to_text());
      } else if (cfl_action == "lengths") {
        auto lengths = length_set(g, cfl_max);
        std::ostringstream s;
        for (int n : lengths) s << (s.tellp() > 0 ? " " : "") << n;
        ctx.emit("cfl", {{"action", "lengths"}, {"max", cfl_max}, {"lengths", lengths}}, s.str());
      } else if (cfl_action == "fit") {
        auto fit = semilinear_fit(length_set(g, cfl_max), cfl_max);
        ctx.emit("cfl", {{"action", "fit"}, {"max", cfl_max}, {"fit", fit ? json(fit->to_string()) : json(nullptr)}},
                 fit ? fit->to_string() : "none");
        code = fit ? Exit::Ok : Exit::Negative;
      } else {
        GroupoidEmbedding e = cfg_to_groupoid(g);
        ctx.emit("cfl", {{"action", "groupoid"}, {"groupoid", e.problem.to_text()}}, e.problem.to_text());
      }
    };
  });

  // wp -----------------------------------------------------------------------
  auto* wp_cmd = app.add_subcommand("wp", "Groupoid word problem membership");
  std::string wp_file, wp_word;
  bool wp_products = false, wp_cfg = false;
  wp_cmd->add_option("-g,--groupoid", wp_file, "Groupoid file")->required();
  wp_cmd->add_option("-w,--word", wp_word, "Word over the groupoid elements");
  wp_cmd->add_flag("--products", wp_products, "Print all bracketing products");
  wp_cmd->add_flag("--to-cfg", wp_cfg, "Print the equivalent grammar instead");
  wp_cmd->callback([&] {
    action = [&] {
      WordProblem wp = parse_groupoid(detail::read_file(wp_file));
      if (wp_cfg) {
        Grammar g = groupoid_to_cfg(wp);
        ctx.emit("wp", {{"grammar", g.to_text()}}, g.to_text());
        return;
      }
      if (wp_word.empty()) throw InputError("wp needs --word (or --to-cfg)");
      Word w = Word::from_string(wp.alphabet(), wp_word);
      const bool v = wp_member(wp, w);
      std::string products, text = detail::bool_text(v);
      for (int x : all_products(wp.groupoid(), w)) products += wp.alphabet().symbol(x);
      if (wp_products) text += "\nproducts: " + products;
      ctx.emit("wp", {{"word", wp_word}, {"result", v}, {"products", products}}, text);
      code = v ? Exit::Ok : Exit::Negative;
    };
  });

  // aperiodic ----------------------------------------------------------------
  auto* ap_cmd = app.add_subcommand("aperiodic", "Decide aperiodicity of an automaton");
  std::string ap_file;
  int ap_definition = 0;
  ap_cmd->add_option("-a,--automaton", ap_file, "Automaton file")->required();
  ap_cmd->add_option("--definition", ap_definition, "Also run the definition check on words up to this length");
  ap_cmd->callback([&] {
    action = [&] {
      Nfa a = parse_nfa(detail::read_file(ap_file));
      Dfa d = subset_construction(a);
      TransitionMonoid m = transition_monoid(d);
      const bool v = is_aperiodic(m);
      json body{{"result", v}, {"states", a.size()}, {"dfa_states", d.size()}, {"monoid_size", m.size()}};
      std::string text = detail::bool_text(v);
      if (ap_definition > 0) {
        const bool dv = definition_check_aperiodic(d, ap_definition);
        body["definition_check"] = dv;
        text += "\ndefinition check (length <= " + std::to_string(ap_definition) + "): " + detail::bool_text(dv);
      }
      ctx.emit("aperiodic", body, text);
      code = v ? Exit::Ok : Exit::Negative;
    };
  });

  // compile-fo ---------------------------------------------------------------
  auto* cf_cmd = app.add_subcommand("compile-fo", "Compile an FO-translation into a finite transducer");
  detail::FormulaSource cf_src;
  std::string cf_gamma = "(1,0)", cf_var = "x", cf_output, cf_signature;
  bool cf_no_fallback = false, cf_check = false;
  cf_src.attach(cf_cmd);
  cf_cmd->add_option("--gamma", cf_gamma, "Output alphabet; body i produces letter i, the last letter is the default")
      ->capture_default_str();
  cf_cmd->add_option("--var", cf_var, "The free variable")->capture_default_str();
  cf_cmd->add_option("-o,--output", cf_output, "Write the transducer here instead of stdout");
  cf_cmd->add_option("--signature", cf_signature, "Type signature: endpoints | order (default: automatic)")
      ->check(CLI::IsMember({"endpoints", "order"}));
  cf_cmd->add_flag("--no-fallback", cf_no_fallback, "Do not retry at rank k+1");
  cf_cmd->add_flag("--check", cf_check, "Verify single-valuedness and aperiodicity");
  cf_cmd->callback([&] {
    action = [&] {
      auto [header, body] = cf_src.load();
      Alphabet sigma = cf_src.alphabet(header, "");
      TransformSpec spec{parse_formula_list(body, sigma), {cf_var}, Alphabet::parse(cf_gamma)};
      CompileOptions opts;
      if (cf_signature == "endpoints") opts.signature = Signature::Endpoints;
      if (cf_signature == "order") opts.signature = Signature::OrderOnly;
      opts.allow_fallback = !cf_no_fallback;
      CompiledTranslation c = compile_fo_translation_detailed(spec, sigma, opts);
      json summary{{"states", c.machine.size()},
                   {"transitions", c.machine.transition_count()},
                   {"rank", c.rank},
                   {"signature", to_string(c.signature)},
                   {"types", c.type_count},
                   {"fell_back", c.fell_back}};
      std::ostringstream text;
      text << "# states " << c.machine.size() << ", transitions " << c.machine.transition_count() << ", rank "
           << c.rank << ", signature " << to_string(c.signature) << ", types " << c.type_count << '\n';
      if (cf_check) {
        const bool sv = is_single_valued(c.machine), ap = is_aperiodic_nft(c.machine);
        summary["single_valued"] = sv;
        summary["aperiodic"] = ap;
        text << "# single-valued " << detail::bool_text(sv) << ", aperiodic " << detail::bool_text(ap) << '\n';
        if (!sv || !ap) code = Exit::Negative;
      }
      const std::string nft = c.machine.to_text();
      if (!cf_output.empty()) {
        detail::write_file(cf_output, nft);
        summary["output"] = cf_output;
      } else {
        summary["nft"] = nft;
        text << nft;
      }
      ctx.emit("compile-fo", summary, text.str());
    };
  });

  // xduce --------------------------------------------------------------------
  auto* xd_cmd = app.add_subcommand("xduce", "Run a transducer on a word");
  std::string xd_file, xd_word;
  bool xd_check = false;
  xd_cmd->add_option("-m,--machine", xd_file, "Transducer file")->required();
  xd_cmd->add_option("-w,--word", xd_word, "Input word")->required();
  xd_cmd->add_flag("--check", xd_check, "Also decide single-valuedness and aperiodicity");
  xd_cmd->callback([&] {
    action = [&] {
      Nft m = parse_nft(detail::read_file(xd_file));
      auto outputs = run_outputs(m, Word::from_string(m.input(), xd_word));
      std::vector<std::string> list;
      for (const auto& o : outputs) list.push_back(o.to_string());
      json body{{"word", xd_word}, {"outputs", list}};
      std::string text;
      for (const auto& o : list) text += o + "\n";
      if (list.empty()) text = "(no output)\n";
      if (xd_check) {
        const bool sv = is_single_valued(m), ap = is_aperiodic_nft(m);
        body["single_valued"] = sv;
        body["aperiodic"] = ap;
        text += "# single-valued " + detail::bool_text(sv) + ", aperiodic " + detail::bool_text(ap) + "\n";
      }
      ctx.emit("xduce", body, text);
      code = list.empty() ? Exit::Negative : Exit::Ok;
    };
  });

  // nivat --------------------------------------------------------------------
  auto* nv_cmd = app.add_subcommand("nivat", "Decompose a unary Lindström sentence as h(D ∩ g^-1(B))");
  detail::FormulaSource nv_src;
  detail::LanguageFlags nv_langs;
  std::string nv_b;
  int nv_check = 0;
  bool nv_print = false;
  nv_src.attach(nv_cmd);
  nv_langs.attach(nv_cmd);
  nv_cmd->add_option("-B,--language", nv_b, "Language for Q[B] in the sentence (built-in name or a bound name)");
  nv_cmd->add_option("--check", nv_check, "Verify the decomposition on all words up to this length");
  nv_cmd->add_flag("--print-d", nv_print, "Print the automaton D");
  nv_cmd->callback([&] {
    action = [&] {
      auto [header, body] = nv_src.load();
      Alphabet delta = nv_src.alphabet(header, "");
      LanguageEnv env = nv_langs.env();
      if (!nv_b.empty()) {
        auto it = env.languages.find(nv_b);
        std::optional<LanguageRef> lang = it != env.languages.end() ? std::optional(it->second) : detail::builtin_language_ci(nv_b);
        if (!lang) throw InputError("unknown language '" + nv_b + "'");
        env.languages.insert_or_assign("B", *lang);
      }
      Formula f = parse_formula(body, delta, &env);
      Decomposition dec = nivat_decompose(f, delta);
      const bool ap = is_aperiodic(dec.d);
      json summary{{"delta", delta.to_string()},       {"gamma", dec.gamma.to_string()},
                   {"language", dec.b.name()},         {"pair_symbols", dec.pair_alphabet.size()},
                   {"d_states", dec.d.size()},         {"d_aperiodic", ap}};
      std::ostringstream text;
      text << "B = " << dec.b.name() << " over " << dec.gamma.to_string() << ", D over " << dec.pair_alphabet.size()
           << " pair symbols with " << dec.d.size() << " states, aperiodic " << detail::bool_text(ap) << '\n';
      text << "pairs:";
      for (std::size_t c = 0; c < dec.pairs.size(); ++c)
        text << ' ' << dec.pair_alphabet.symbol(static_cast<int>(c)) << "=(" << delta.symbol(dec.pairs[c].first) << ','
             << dec.gamma.symbol(dec.pairs[c].second) << ')';
      text << '\n';
      if (nv_check > 0) {
        auto check = check_decomposition_detailed(dec, f, nv_check);
        summary["check_length"] = nv_check;
        summary["check_words"] = check.words;
        summary["verified"] = check.ok;
        if (check.counterexample) summary["counterexample"] = check.counterexample->to_string();
        text << "verified on " << check.words << " words up to length " << nv_check << ": "
             << detail::bool_text(check.ok);
        if (check.counterexample) text << " (counterexample " << check.counterexample->to_string() << ")";
        text << '\n';
        if (!check.ok) code = Exit::Negative;
      }
      if (nv_print) {
        summary["d"] = dec.d.to_text();
        text << dec.d.to_text();
      }
      ctx.emit("nivat", summary, text.str());
    };
  });

  // witness ------------------------------------------------------------------
  auto* wt_cmd = app.add_subcommand("witness", "Separation ingredients: lm | tphi | squares | ww");
  wt_cmd->require_subcommand(1);

  auto* lm_cmd = wt_cmd->add_subcommand("lm", "(l,m)-bounded factorization, or the closure sweeps");
  std::string lm_word;
  int lm_l = 1, lm_m = 1, lm_sweep = 0, lm_samples = 500;
  lm_cmd->add_option("-w,--word", lm_word, "0-1 string");
  lm_cmd->add_option("-l", lm_l, "Block bound")->capture_default_str();
  lm_cmd->add_option("-m", lm_m, "Unit length bound")->capture_default_str();
  lm_cmd->add_option("--sweep", lm_sweep, "Run the closure checks exhaustively up to this length (bounds <= 2)");
  lm_cmd->add_option("--samples", lm_samples, "Random samples (up to length 60) for --sweep")->capture_default_str();
  lm_cmd->callback([&] {
    action = [&] {
      if (lm_sweep > 0) {
        auto ex = lemma_lm_exhaustive(lm_sweep, 2);
        auto rnd = lemma_lm_random(lm_samples, 60, 2, ctx.seed);
        const bool ok = ex.failures == 0 && ex.complement_failures == 0 && rnd.failures == 0;
        std::ostringstream text;
        text << "exhaustive (length <= " << lm_sweep << "): " << ex.instances << " instances, " << ex.failures
             << " failures, " << ex.complement_failures << " complement failures\n"
             << "random: " << rnd.samples << " samples, " << rnd.failures << " failures";
        ctx.emit("witness lm",
                 {{"exhaustive_instances", ex.instances}, {"exhaustive_failures", ex.failures},
                  {"complement_failures", ex.complement_failures}, {"random_samples", rnd.samples},
                  {"random_failures", rnd.failures}, {"seed", ctx.seed}, {"result", ok}},
                 text.str());
        code = ok ? Exit::Ok : Exit::Negative;
        return;
      }
      if (lm_word.empty()) throw InputError("witness lm needs --word or --sweep");
      auto f = lm_bounded(lm_word, lm_l, lm_m);
      json blocks = json::array();
      if (f)
        for (const auto& b : f->blocks) blocks.push_back({{"unit", b.unit}, {"count", b.count}});
      ctx.emit("witness lm",
               {{"word", lm_word}, {"l", lm_l}, {"m", lm_m}, {"result", f.has_value()},
                {"min_blocks", min_blocks(lm_word, lm_m)}, {"blocks", f ? blocks : json(nullptr)}},
               f ? f->to_string() : "none (needs " + std::to_string(min_blocks(lm_word, lm_m)) + " blocks)");
      code = f ? Exit::Ok : Exit::Negative;
    };
  });

  auto* tp_cmd = wt_cmd->add_subcommand("tphi", "t_phi strings over 0^n and their (l,m) profile");
  detail::FormulaSource tp_src;
  std::string tp_x = "x", tp_params, tp_assign;
  int tp_n = 0, tp_max_n = 24;
  bool tp_profile = false;
  tp_src.attach(tp_cmd);
  tp_cmd->add_option("--var", tp_x, "The position variable")->capture_default_str();
  tp_cmd->add_option("--params", tp_params, "Parameter variables, comma separated");
  tp_cmd->add_option("--assign", tp_assign, "Parameter values for a single string");
  tp_cmd->add_option("-n", tp_n, "Word length for a single string");
  tp_cmd->add_flag("--profile", tp_profile, "Search the minimal uniform (l,m)");
  tp_cmd->add_option("--max-n", tp_max_n, "Length bound for --profile")->capture_default_str();
  tp_cmd->callback([&] {
    action = [&] {
      auto [header, body] = tp_src.load();
      Formula phi = parse_formula(body, header.value_or(Alphabet("0")));
      if (tp_profile) {
        auto p = minimal_lm(phi, tp_x, detail::split(tp_params, ','), tp_max_n);
        std::ostringstream text;
        text << "worst-case blocks by m:";
        for (int b : p.blocks_needed) text << ' ' << b;
        text << '\n';
        if (p.minimal) text << "minimal (l,m) = (" << p.minimal->first << "," << p.minimal->second << ")";
        else text << "no (l,m) with l <= 12, m <= 8";
        ctx.emit("witness tphi",
                 {{"max_n", tp_max_n}, {"blocks_needed", p.blocks_needed},
                  {"minimal", p.minimal ? json{p.minimal->first, p.minimal->second} : json(nullptr)}},
                 text.str());
        code = p.minimal ? Exit::Ok : Exit::Negative;
        return;
      }
      if (tp_n < 1) throw InputError("witness tphi needs -n >= 1 or --profile");
      const std::string t = t_phi(phi, tp_x, detail::parse_assignment(tp_assign), tp_n);
      ctx.emit("witness tphi", {{"n", tp_n}, {"t", t}}, t);
    };
  });

  auto* sq_cmd = wt_cmd->add_subcommand("squares", "Lengths n^2 against the bundled unary grammars");
  int sq_max = 60;
  bool sq_empty = false;
  sq_cmd->add_option("--max", sq_max, "Length bound N")->capture_default_str();
  sq_cmd->add_flag("--no-corpus", sq_empty, "Report the squares only");
  sq_cmd->callback([&] {
    action = [&] {
      auto r = sq_empty ? squares_witness_report(sq_max, {}) : squares_witness_report(sq_max);
      std::ostringstream text;
      text << "N = " << sq_max << "\nsquares: " << (r.squares_fit ? "fit " + r.squares_fit->to_string() : "no fit")
           << '\n';
      json corpus = json::array();
      for (const auto& e : r.corpus) {
        text << e.name << ": " << (e.fit ? e.fit->to_string() : "no fit") << '\n';
        corpus.push_back({{"name", e.name}, {"fit", e.fit ? json(e.fit->to_string()) : json(nullptr)}});
      }
      text << "separates: " << detail::bool_text(r.separates());
      ctx.emit("witness squares",
               {{"max", sq_max},
                {"squares_fit", r.squares_fit ? json(r.squares_fit->to_string()) : json(nullptr)},
                {"corpus", corpus},
                {"separates", r.separates()}},
               text.str());
      code = r.separates() ? Exit::Ok : Exit::Negative;
    };
  });

  auto* ww_cmd = wt_cmd->add_subcommand("ww", "Membership in {ww} and in the bundled complement grammar");
  std::string ww_word;
  ww_cmd->add_option("-w,--word", ww_word, "Word over (a,b)")->required();
  ww_cmd->callback([&] {
    action = [&] {
      auto [is, co] = ww_witness(Word::from_string(Alphabet("ab"), ww_word));
      ctx.emit("witness ww", {{"word", ww_word}, {"ww", is}, {"complement", co}, {"consistent", is != co}},
               "ww " + detail::bool_text(is) + ", complement " + detail::bool_text(co));
      code = is != co ? Exit::Ok : Exit::Negative;
    };
  });

  // selftest -----------------------------------------------------------------
  auto* st_cmd = app.add_subcommand("selftest", "Run the acceptance suite");
  int st_max_len = 0;
  std::vector<int> st_only;
  st_cmd->add_option("--max-len", st_max_len, "Cap every word-length sweep at this length");
  st_cmd->add_option("--only", st_only, "Criterion numbers to run")->delimiter(',');
  st_cmd->callback([&] {
    action = [&] {
      acceptance::Options o;
      o.max_len = st_max_len;
      o.jobs = ctx.jobs;
      if (ctx.seeded) o.seed = ctx.seed;
      auto results = acceptance::run(o, st_only, ctx.json_output ? nullptr : &ctx.out);
      const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
      if (ctx.json_output) {
        json list = json::array();
        for (const auto& r : results)
          list.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
        ctx.emit("selftest", {{"max_len", st_max_len}, {"criteria", list}, {"result", ok}}, "");
      } else {
        ctx.out << (ok ? "all criteria passed" : "some criteria failed") << '\n';
      }
      code = ok ? Exit::Ok : Exit::Negative;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return Exit::Usage;
  }
  ctx.seeded = seed_opt->count() > 0;
  try {
    if (action) action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return Exit::Input;
  }
  return code;
}

} // namespace strlogic::cli

#endif // STRLOGIC_CLI_HPP
