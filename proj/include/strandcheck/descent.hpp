#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "strandcheck/rewrite.hpp"

namespace sc {

// Kernel-pair base: A, B, Q = B x_A B, R = Q x_B Q with f, f1, f2, Delta, pi, pi1, pi2.
std::shared_ptr<const BasePresentation> builtin_descent_base();
Signature descent_signature(Extension e, std::shared_ptr<const BasePresentation> base = nullptr);

// The descent generator of an extension: alpha (TA), phi (DD), beta (AC).
GenTwoCell extension_generator(Extension e);

// F_phi, G_beta or H_alpha applied to the generator of its source extension.
GenTwoCell translation_macro(const std::string& name);
Extension translation_source(const std::string& name);

// The thirteen bundled derivations, in dependency order.
const std::vector<ProofScript>& bundled_scripts();
std::vector<ProofScript> rebase_scripts(const std::vector<ProofScript>& scripts,
                                        std::shared_ptr<const BasePresentation> base);

struct TheoremOptions {
  std::set<std::string> disabled_axioms;
  std::set<std::string> unmarked_squares;
};

struct TheoremReport {
  std::vector<CheckReport> reports;
  std::size_t verified = 0;
  bool ok() const { return verified == reports.size(); }
};

TheoremReport verify_theorem(const TheoremOptions& opt = {});
TheoremReport verify_scripts(const std::vector<ProofScript>& scripts, const TheoremOptions& opt);

}  // namespace sc
