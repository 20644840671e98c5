#pragma once

#include <memory>
#include <string>
#include <vector>

#include "irb/ingest/article.hpp"

namespace irb::ingest {

// One token with its dependency label. Labels used by the completeness
// rule: "nsubj" (subject), "root" (main verb), "obj" (object or
// complement); everything else is "dep" or "punct".
struct DepToken {
    std::string text;
    std::string dep;
};

// Pluggable dependency tagger. The pipeline refuses to run without one;
// swapping in a model-backed implementation only requires this interface.
class SyntacticTagger {
public:
    virtual ~SyntacticTagger() = default;
    virtual std::vector<DepToken> parse(const std::string& sentence) const = 0;
};

// Lexicon-and-morphology tagger: finds the main verb via auxiliary /
// irregular-past / suffix cues, then labels the nearest preceding noun-like
// token as subject and the first following content token as object.
class HeuristicTagger final : public SyntacticTagger {
public:
    std::vector<DepToken> parse(const std::string& sentence) const override;
};

// Creates the tagger named in configuration. Only "heuristic" is built in;
// any other name raises an error that names the missing tagger. Never
// returns null: the completeness filter is mandatory.
std::unique_ptr<SyntacticTagger> make_tagger(const std::string& name);

// True when the parse carries a subject, a root verb, and an
// object/complement: the completeness rule.
bool is_complete_sentence(const std::string& sentence, const SyntacticTagger& tagger);

// Keeps only sentences that pass the completeness rule. Order-preserving.
std::vector<CitingSentence> filter_syntactic_completeness(
    std::vector<CitingSentence> sentences, const SyntacticTagger& tagger);

}  // namespace irb::ingest
