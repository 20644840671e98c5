#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "irb/bench/bench.hpp"
#include "irb/evidence/document.hpp"
#include "irb/llm/gateway.hpp"
#include "irb/retrieval/run.hpp"

namespace irb::geneval {

enum class AnswerMode { rag, closed_book };

std::string to_string(AnswerMode mode);
AnswerMode answer_mode_from_string(const std::string& s);  // accepts "closed-book" too

struct AnswerRecord {
    std::string query_id;
    AnswerMode mode = AnswerMode::rag;
    std::vector<std::string> context_doc_ids;  // empty for closed_book
    std::string answer_text;
    std::string model_id;
    llm::Usage usage;
    bool failed = false;  // provider failure; excluded from rates
    std::string error;

    nlohmann::json to_json() const;
    static AnswerRecord from_json(const nlohmann::json& j);
};

enum class Label { correct, incorrect, not_attempted };

std::string to_string(Label label);
Label label_from_string(const std::string& s);

struct JudgeVote {
    std::string judge_model_id;
    Label label = Label::not_attempted;
};

struct Grade {
    std::string query_id;
    std::vector<JudgeVote> per_judge;
    // combined = mean of per-judge one-hot vectors; c + i + n = 1
    double correct = 0.0;
    double incorrect = 0.0;
    double not_attempted = 0.0;
    bool failed = false;  // no judge produced a parseable label

    nlohmann::json to_json() const;
    static Grade from_json(const nlohmann::json& j);
};

// One "Context N:" block per document, in rank order, with source URL,
// publication date ("unknown" when absent), and content.
std::string format_contexts(const std::vector<const evidence::EvidenceDocument*>& docs);

// The full QA-with-retrieval prompt, byte-identical to what answer_query
// sends through the gateway.
std::string format_rag_prompt(const std::string& question,
                              const std::vector<const evidence::EvidenceDocument*>& docs,
                              const util::Date& current_date, const llm::PromptTemplate& tmpl);

// Single completion, no content retries; provider failures are recorded on
// the AnswerRecord rather than thrown.
AnswerRecord answer_query(const std::string& query_id, const std::string& question,
                          AnswerMode mode,
                          const std::vector<const evidence::EvidenceDocument*>& docs,
                          const util::Date& current_date, llm::Gateway& gateway,
                          const llm::TemplateLibrary& templates);

// Parses CORRECT / INCORRECT / NOT_ATTEMPTED (or "NOT ATTEMPTED") from a
// judge reply; unparseable output earns one re-prompt, then the judge
// abstains. The combined grade averages the remaining judges.
Grade grade_answer(const std::string& query_id, const std::string& question,
                   const std::string& prediction, const std::string& gold,
                   std::vector<llm::Gateway*> judges, const llm::TemplateLibrary& templates);

// True iff every relevant doc appears in the top-k of the ranking.
bool retrieval_correct(const std::set<std::string>& relevant,
                       const std::vector<retrieval::DocHit>& ranking, int k);

enum class Interplay { redundant, resilience, augmentation, hopeless };

std::string to_string(Interplay cell);

// Internal knowledge counts as correct when the closed-book combined
// correctness is >= 0.5.
Interplay interplay_classify(const Grade& closed_book, bool retrieval_ok);

struct SliceRates {
    double correct = 0.0;
    double incorrect = 0.0;
    double not_attempted = 0.0;
    std::size_t count = 0;
};

struct EvalReport {
    int k = 5;
    std::string generator_model;
    std::map<std::string, SliceRates> slices;  // RAG grades by attribute slice
    // RAG grades conditioned on whether all gold docs were retrieved.
    SliceRates when_retrieval_correct;
    SliceRates when_retrieval_incorrect;
    // Interplay cells: member count plus RAG rates within the cell.
    std::map<std::string, SliceRates> interplay;
    std::size_t failed_answers = 0;
    std::size_t failed_grades = 0;

    nlohmann::json to_json() const;
    std::string markdown() const;
};

// Joins RAG grades, closed-book grades, and the retrieval run into the
// sliced report. Queries missing a grade raise an error listing their ids;
// failed grades are excluded and counted.
EvalReport aggregate_report(const std::vector<Grade>& rag_grades,
                            const std::vector<Grade>& closed_book_grades,
                            const retrieval::RetrievalRun& run, const bench::Qrels& qrels,
                            const std::vector<qgen::QASample>& queries, int k,
                            const std::string& generator_model, std::size_t failed_answers);

}  // namespace irb::geneval
