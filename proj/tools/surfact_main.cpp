// surfact - classify Z_{p^k}^m actions on closed oriented surfaces.
//
// Subcommands: validate, invariants, equiv, enumerate, realize, normal-form,
// oracle. Verdicts are data, not exit codes: a finished run exits 0 unless
// --exit-code asks for 3 on "not equivalent". I/O and schema problems exit
// 1, domain validation failures (and oracle disagreements) exit 2.
//
// With --json the report envelope goes to stdout; it is byte-stable for
// identical inputs.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surfact/classify.hpp"
#include "surfact/json_io.hpp"
#include "surfact/oracle.hpp"
#include "surfact/version.hpp"

namespace {

using surfact::ojson;

void emit(bool json_mode, const std::string& command,
          const std::vector<std::string>& inputs, const ojson& result,
          const std::string& human) {
  if (json_mode) {
    std::cout << surfact::make_report(command, inputs, result).dump(2) << "\n";
  } else {
    std::cout << human;
  }
}

std::string q_str(const surfact::QTuple& q) {
  std::string s = "[";
  for (std::size_t i = 0; i < q.size(); ++i) s += (i ? "," : "") + std::to_string(q[i]);
  return s + "]";
}

surfact::QTuple parse_q(const std::string& text) {
  ojson j = ojson::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_array())
    surfact::fail(surfact::errc::schema, "--q must be a JSON array like \"[2,0]\"");
  surfact::QTuple q;
  for (const auto& e : j) {
    if (!e.is_number_integer())
      surfact::fail(surfact::errc::schema, "--q entries must be integers");
    q.push_back(e.get<int>());
  }
  return q;
}

ojson verdict_to_json(const surfact::EquivalenceVerdict& v) {
  ojson r;
  r["mode"] = v.mode == surfact::EquivMode::strong ? "strong" : "weak";
  r["equivalent"] = v.equivalent;
  r["witness"] = v.witness ? surfact::matrix_to_json(*v.witness) : ojson(nullptr);
  r["reason"] = v.equivalent ? ojson(nullptr) : ojson(v.reason);
  r["partial"] = v.partial;
  return r;
}

int run_oracle_suite(const std::string& suite, std::int64_t p, int k, int m, int g,
                     std::int64_t budget, bool json_mode) {
  surfact::Modulus mod(p, k);
  ojson result;
  result["suite"] = suite;
  result["p"] = p;
  result["k"] = k;
  result["m"] = m;
  result["g"] = g;
  bool ok = true;
  std::string human;
  if (suite == "strong" || suite == "weak") {
    surfact::EquivMode mode =
        suite == "strong" ? surfact::EquivMode::strong : surfact::EquivMode::weak;
    surfact::OrbitPartition part = surfact::orbit_partition(mod, m, g, mode, budget);
    auto inv = surfact::invariant_partition(part.elements, mode);
    ok = inv == part.classes;
    result["descriptors"] = part.elements.size();
    result["orbit_classes"] = part.classes.size();
    result["invariant_classes"] = inv.size();
    result["agreement"] = ok;
    human = std::to_string(part.classes.size()) + " class" +
            (part.classes.size() == 1 ? "" : "es") + ", agreement " + (ok ? "OK" : "FAILED") + "\n";
  } else if (suite == "extension") {
    ok = surfact::check_extension_property(g, mod, m, budget);
    result["extension_property"] = ok;
    human = std::string("extension property ") + (ok ? "holds" : "FAILED") + "\n";
  } else if (suite == "q") {
    // normal-form route vs kernel/mu definition on random and small
    // exhaustive corpora
    std::mt19937_64 rng(20240901);
    int checked = 0;
    auto check = [&](const surfact::MatZ& gram) {
      surfact::AlternatingForm F = surfact::validate_alternating(gram);
      ++checked;
      if (surfact::q_invariant(F) != surfact::q_by_definition(F)) ok = false;
    };
    for (int trial = 0; trial < 200 && ok; ++trial) {
      surfact::MatZ gram(m, m, mod);
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          std::int64_t v = static_cast<std::int64_t>(rng() % mod.pk());
          gram.set(i, j, v);
          gram.set(j, i, -v);
        }
      check(gram);
    }
    if (mod.pk() <= 4 && m <= 3 && ok) {
      std::vector<int> tri(static_cast<std::size_t>(m) * (m - 1) / 2, 0);
      bool more = !tri.empty();
      if (tri.empty()) {
        surfact::MatZ gram(m, m, mod);
        check(gram);
      }
      while (more && ok) {
        surfact::MatZ gram(m, m, mod);
        int idx = 0;
        for (int i = 0; i < m; ++i)
          for (int j = i + 1; j < m; ++j) {
            gram.set(i, j, tri[idx]);
            gram.set(j, i, -tri[idx]);
            ++idx;
          }
        check(gram);
        more = false;
        for (int i = static_cast<int>(tri.size()) - 1; i >= 0; --i) {
          if (++tri[i] < mod.pk()) { more = true; break; }
          tri[i] = 0;
        }
      }
    }
    result["forms_checked"] = checked;
    result["agreement"] = ok;
    human = "q two-method agreement on " + std::to_string(checked) + " forms: " +
            (ok ? "OK" : "FAILED") + "\n";
  } else {
    surfact::fail(surfact::errc::schema, "unknown oracle suite \"" + suite + "\"");
  }
  emit(json_mode, "oracle " + suite, {}, result, human);
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surfact - exact classification of Z_{p^k}^m actions on closed oriented surfaces"};
  app.require_subcommand(1);
  int exit_code = 0;

  try {
    bool json_mode = false;
    app.add_flag("--json", json_mode, "emit a machine-readable JSON report on stdout");

    // validate
    auto* c_validate = app.add_subcommand("validate", "check an action file");
    std::string validate_path;
    c_validate->add_option("file", validate_path, "action JSON file")->required();
    c_validate->callback([&] {
      surfact::ActionDescriptor A = surfact::action_from_json(surfact::parse_json_file(validate_path));
      surfact::validate(A);
      ojson result;
      result["valid"] = true;
      result["p"] = A.mod.p();
      result["k"] = A.mod.k();
      result["m"] = A.m;
      result["quotient_genus"] = A.g;
      result["branch_points"] = [&] {
        std::int64_t total = 0;
        for (const auto& [h, c] : A.branches) total += c;
        return total;
      }();
      emit(json_mode, "validate", {validate_path}, result,
           "OK: valid action descriptor over Z_{" + std::to_string(A.mod.p()) + "^" +
               std::to_string(A.mod.k()) + "}^" + std::to_string(A.m) + "\n");
    });

    // invariants
    auto* c_inv = app.add_subcommand("invariants", "compute the invariant bundle of an action");
    std::string inv_path;
    std::int64_t inv_budget = surfact::kDefaultBudget;
    c_inv->add_option("file", inv_path, "action JSON file")->required();
    c_inv->add_option("--budget", inv_budget, "Aut(G) canonicalization budget");
    c_inv->callback([&] {
      surfact::ActionDescriptor A = surfact::action_from_json(surfact::parse_json_file(inv_path));
      surfact::validate(A);
      surfact::ClassifyOptions opts;
      opts.aut_budget = inv_budget;
      surfact::FreeStructure fs = surfact::g_free_structure(A);
      surfact::AlternatingForm F = surfact::induced_form(A);
      surfact::NormalForm nf = surfact::normal_form(F);
      surfact::WeakInvariant wi = surfact::weak_invariant(A, opts);
      ojson result;
      result["covering_genus"] = wi.covering_genus;
      result["g_free_rank"] = fs.n;
      result["gram"] = surfact::matrix_to_json(F.gram);
      result["pair_exponents"] = nf.pair_exponents;
      result["radical_rank"] = nf.radical_rank;
      result["q"] = wi.q;
      result["l"] = surfact::char_function_to_json(wi.l_canonical);
      result["l_exact"] = wi.l_canonical_exact;
      std::string human = "covering_genus = " + std::to_string(wi.covering_genus) + "\n" +
                          "g_free_rank = " + std::to_string(fs.n) + "\n" +
                          "gram = " + F.gram.str() + "\n" +
                          "q = " + q_str(wi.q) + "\n" +
                          "l = " + surfact::char_function_to_json(wi.l_canonical).dump() + "\n";
      emit(json_mode, "invariants", {inv_path}, result, human);
    });

    // equiv
    auto* c_equiv = app.add_subcommand("equiv", "decide strong or weak equivalence of two actions");
    std::string equiv_mode = "strong", path_a, path_b;
    bool equiv_exit_code = false, equiv_exhaustive = false;
    std::int64_t equiv_budget = surfact::kDefaultBudget;
    c_equiv->add_option("--mode", equiv_mode, "strong|weak")
        ->check(CLI::IsMember({"strong", "weak"}));
    c_equiv->add_option("fileA", path_a, "first action file")->required();
    c_equiv->add_option("fileB", path_b, "second action file")->required();
    c_equiv->add_flag("--exit-code", equiv_exit_code, "exit 3 when not equivalent");
    c_equiv->add_flag("--exhaustive", equiv_exhaustive, "fail instead of degrading the Aut search");
    c_equiv->add_option("--budget", equiv_budget, "Aut(G) search budget");
    c_equiv->callback([&] {
      surfact::ActionDescriptor A = surfact::action_from_json(surfact::parse_json_file(path_a));
      surfact::ActionDescriptor B = surfact::action_from_json(surfact::parse_json_file(path_b));
      surfact::EquivalenceVerdict v{false, surfact::EquivMode::strong, std::nullopt, ""};
      if (equiv_mode == "strong") {
        v = surfact::strong_equivalent(A, B);
      } else {
        surfact::ClassifyOptions opts;
        opts.aut_budget = equiv_budget;
        opts.force_exhaustive = equiv_exhaustive;
        v = surfact::weak_equivalent(A, B, opts);
      }
      std::string human = std::string(v.equivalent ? "equivalent" : "not equivalent") +
                          " (" + equiv_mode + ")";
      if (!v.equivalent) human += ": " + v.reason;
      if (v.witness) human += ", witness " + v.witness->str();
      human += "\n";
      emit(json_mode, "equiv --mode " + equiv_mode, {path_a, path_b}, verdict_to_json(v), human);
      if (equiv_exit_code && !v.equivalent) exit_code = 3;
    });

    // enumerate
    auto* c_enum = app.add_subcommand("enumerate", "list weak classes of free actions at a covering genus");
    std::int64_t en_p = 2, en_cover = 1;
    int en_k = 1, en_m = 1;
    c_enum->add_option("p", en_p, "prime")->required();
    c_enum->add_option("k", en_k, "exponent")->required();
    c_enum->add_option("m", en_m, "rank of G")->required();
    c_enum->add_option("--covering-genus", en_cover, "genus of the covering surface")->required();
    c_enum->callback([&] {
      surfact::Modulus mod(en_p, en_k);
      auto classes = surfact::enumerate_weak_classes(mod, en_m, en_cover);
      ojson result;
      result["p"] = en_p;
      result["k"] = en_k;
      result["m"] = en_m;
      result["covering_genus"] = en_cover;
      ojson arr = ojson::array();
      for (const auto& q : classes) arr.push_back(q);
      result["classes"] = std::move(arr);
      std::string human = std::to_string(classes.size()) + " weak class" +
                          (classes.size() == 1 ? "" : "es");
      for (const auto& q : classes) human += " " + q_str(q);
      emit(json_mode, "enumerate", {}, result, human + "\n");
    });

    // realize
    auto* c_realize = app.add_subcommand("realize", "construct a free action with a prescribed form or q");
    std::string realize_form_path, realize_q_text, realize_out;
    std::int64_t re_p = 0;
    int re_k = 0, re_m = 0, re_genus = -1;
    c_realize->add_option("--form", realize_form_path, "form JSON file");
    c_realize->add_option("--q", realize_q_text, "q-tuple, e.g. \"[2,0]\"");
    c_realize->add_option("--p", re_p, "prime (with --q)");
    c_realize->add_option("--k", re_k, "exponent (with --q)");
    c_realize->add_option("--m", re_m, "rank of G (with --q)");
    c_realize->add_option("--genus", re_genus, "quotient genus")->required();
    c_realize->add_option("--out", realize_out, "write the action file here");
    c_realize->callback([&] {
      std::vector<std::string> inputs;
      surfact::AlternatingForm F = [&] {
        if (!realize_form_path.empty()) {
          inputs.push_back(realize_form_path);
          return surfact::form_from_json(surfact::parse_json_file(realize_form_path));
        }
        if (realize_q_text.empty() || re_p == 0 || re_k == 0 || re_m == 0)
          surfact::fail(surfact::errc::schema, "need either --form or --q with --p, --k and --m");
        surfact::Modulus mod(re_p, re_k);
        return surfact::form_from_q(parse_q(realize_q_text), re_m, mod);
      }();
      surfact::ActionDescriptor A = surfact::realize(F, re_genus);
      ojson result;
      result["q"] = surfact::q_invariant(F);
      result["covering_genus"] = surfact::covering_genus(A);
      result["action"] = surfact::action_to_json(A);
      if (!realize_out.empty()) {
        std::ofstream out(realize_out, std::ios::binary);
        if (!out) surfact::fail(surfact::errc::schema, "cannot write " + realize_out);
        out << surfact::action_to_json(A).dump(2) << "\n";
      }
      emit(json_mode, "realize", inputs, result,
           "theta = " + A.theta.str() + "\ncovering_genus = " +
               std::to_string(surfact::covering_genus(A)) + "\n");
    });

    // normal-form
    auto* c_nf = app.add_subcommand("normal-form", "block normal form of an alternating form");
    std::string nf_path;
    c_nf->add_option("file", nf_path, "form JSON file")->required();
    c_nf->callback([&] {
      surfact::AlternatingForm F = surfact::form_from_json(surfact::parse_json_file(nf_path));
      surfact::NormalForm nf = surfact::normal_form(F);
      ojson result;
      result["m"] = F.m;
      result["pair_exponents"] = nf.pair_exponents;
      result["radical_rank"] = nf.radical_rank;
      result["q"] = surfact::q_from_exponents(nf, F.mod.k());
      result["C"] = surfact::matrix_to_json(nf.C);
      result["block"] = surfact::matrix_to_json(surfact::block_matrix(nf, F.mod));
      std::string human = "pair_exponents = " + q_str(nf.pair_exponents) + "\n" +
                          "radical_rank = " + std::to_string(nf.radical_rank) + "\n" +
                          "q = " + q_str(surfact::q_from_exponents(nf, F.mod.k())) + "\n";
      emit(json_mode, "normal-form", {nf_path}, result, human);
    });

    // oracle
    auto* c_oracle = app.add_subcommand("oracle", "brute-force agreement suites at tiny parameters");
    std::string oracle_suite;
    std::int64_t or_p = 2, or_budget = surfact::kDefaultBudget;
    int or_k = 1, or_m = 1, or_g = 1;
    c_oracle->add_option("suite", oracle_suite, "strong|weak|extension|q")->required();
    c_oracle->add_option("--p", or_p, "prime")->required();
    c_oracle->add_option("--k", or_k, "exponent")->required();
    c_oracle->add_option("--m", or_m, "rank of G")->required();
    c_oracle->add_option("--g", or_g, "quotient genus");
    c_oracle->add_option("--budget", or_budget, "candidate budget");
    c_oracle->callback([&] {
      exit_code = run_oracle_suite(oracle_suite, or_p, or_k, or_m, or_g, or_budget, json_mode);
    });

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      return app.exit(e);
    }
    return exit_code;
  } catch (const surfact::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == surfact::errc::schema ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
