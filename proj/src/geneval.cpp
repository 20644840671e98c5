#include "irb/geneval/eval.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "irb/util/strings.hpp"

namespace irb::geneval {

namespace {

std::string percent(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.1f", 100.0 * value);
    return buffer;
}

nlohmann::json rates_to_json(const SliceRates& rates) {
    return {{"correct", rates.correct},
            {"incorrect", rates.incorrect},
            {"not_attempted", rates.not_attempted},
            {"count", rates.count}};
}

}  // namespace

std::string to_string(AnswerMode mode) {
    return mode == AnswerMode::rag ? "rag" : "closed_book";
}

AnswerMode answer_mode_from_string(const std::string& s) {
    if (s == "rag") return AnswerMode::rag;
    if (s == "closed_book" || s == "closed-book") return AnswerMode::closed_book;
    throw util::Error("unknown answer mode: " + s);
}

std::string to_string(Label label) {
    switch (label) {
        case Label::correct: return "correct";
        case Label::incorrect: return "incorrect";
        case Label::not_attempted: return "not_attempted";
    }
    return "not_attempted";
}

Label label_from_string(const std::string& s) {
    if (s == "correct") return Label::correct;
    if (s == "incorrect") return Label::incorrect;
    if (s == "not_attempted") return Label::not_attempted;
    throw util::Error("unknown grade label: " + s);
}

nlohmann::json AnswerRecord::to_json() const {
    nlohmann::json usage_json = {{"prompt_tokens", usage.prompt_tokens},
                                 {"completion_tokens", usage.completion_tokens}};
    if (usage.reasoning_tokens) usage_json["reasoning_tokens"] = *usage.reasoning_tokens;
    return {{"query_id", query_id},
            {"mode", geneval::to_string(mode)},
            {"context_doc_ids", context_doc_ids},
            {"answer_text", answer_text},
            {"model_id", model_id},
            {"usage", usage_json},
            {"failed", failed},
            {"error", error}};
}

AnswerRecord AnswerRecord::from_json(const nlohmann::json& j) {
    AnswerRecord r;
    r.query_id = j.at("query_id").get<std::string>();
    r.mode = answer_mode_from_string(j.at("mode").get<std::string>());
    r.context_doc_ids = j.at("context_doc_ids").get<std::vector<std::string>>();
    r.answer_text = j.at("answer_text").get<std::string>();
    r.model_id = j.at("model_id").get<std::string>();
    r.usage.prompt_tokens = j.at("usage").at("prompt_tokens").get<long>();
    r.usage.completion_tokens = j.at("usage").at("completion_tokens").get<long>();
    if (j.at("usage").contains("reasoning_tokens")) {
        r.usage.reasoning_tokens = j.at("usage").at("reasoning_tokens").get<long>();
    }
    r.failed = j.at("failed").get<bool>();
    r.error = j.at("error").get<std::string>();
    return r;
}

nlohmann::json Grade::to_json() const {
    nlohmann::json judges = nlohmann::json::array();
    for (const auto& vote : per_judge) {
        judges.push_back({{"judge_model_id", vote.judge_model_id},
                          {"label", geneval::to_string(vote.label)}});
    }
    return {{"query_id", query_id},
            {"per_judge", judges},
            {"combined",
             {{"correct", correct}, {"incorrect", incorrect}, {"not_attempted", not_attempted}}},
            {"failed", failed}};
}

Grade Grade::from_json(const nlohmann::json& j) {
    Grade g;
    g.query_id = j.at("query_id").get<std::string>();
    for (const auto& vote : j.at("per_judge")) {
        g.per_judge.push_back({vote.at("judge_model_id").get<std::string>(),
                               label_from_string(vote.at("label").get<std::string>())});
    }
    g.correct = j.at("combined").at("correct").get<double>();
    g.incorrect = j.at("combined").at("incorrect").get<double>();
    g.not_attempted = j.at("combined").at("not_attempted").get<double>();
    g.failed = j.at("failed").get<bool>();
    return g;
}

std::string format_contexts(const std::vector<const evidence::EvidenceDocument*>& docs) {
    std::string out;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (i > 0) out += "\n";
        out += "Context " + std::to_string(i + 1) + ":\n";
        out += "Source: " + docs[i]->url + "\n";
        out += "Published date: " +
               (docs[i]->published ? docs[i]->published->iso() : std::string("unknown")) + "\n";
        out += "Content: " + docs[i]->content + "\n";
    }
    return out;
}

std::string format_rag_prompt(const std::string& question,
                              const std::vector<const evidence::EvidenceDocument*>& docs,
                              const util::Date& current_date, const llm::PromptTemplate& tmpl) {
    return llm::render(tmpl, {{"ADD CONTEXT HERE", format_contexts(docs)},
                              {"ADD_QUESTION_DATE", current_date.iso()},
                              {"ADD QUESTION HERE", question}});
}

AnswerRecord answer_query(const std::string& query_id, const std::string& question,
                          AnswerMode mode,
                          const std::vector<const evidence::EvidenceDocument*>& docs,
                          const util::Date& current_date, llm::Gateway& gateway,
                          const llm::TemplateLibrary& templates) {
    AnswerRecord record;
    record.query_id = query_id;
    record.mode = mode;
    record.model_id = gateway.config().model_id;

    std::map<std::string, std::string> bindings = {{"ADD_QUESTION_DATE", current_date.iso()},
                                                   {"ADD QUESTION HERE", question}};
    const llm::PromptTemplate* tmpl = nullptr;
    if (mode == AnswerMode::rag) {
        tmpl = &templates.get("qa_rag");
        bindings["ADD CONTEXT HERE"] = format_contexts(docs);
        for (const auto* doc : docs) record.context_doc_ids.push_back(doc->doc_id);
    } else {
        tmpl = &templates.get("qa_closed_book");
    }

    try {
        auto call = gateway.complete(*tmpl, bindings);
        record.answer_text = util::trim(call.response_text);
        record.usage = call.usage;
    } catch (const llm::ProviderError& e) {
        record.failed = true;
        record.error = e.what();
    } catch (const llm::ContextLengthError& e) {
        record.failed = true;
        record.error = e.what();
    }
    return record;
}

namespace {

// NOT_ATTEMPTED outranks INCORRECT outranks CORRECT because the longer
// tokens contain the shorter ones as substrings.
std::optional<Label> parse_label(const std::string& response) {
    std::string lower = util::to_lower(response);
    if (lower.find("not_attempted") != std::string::npos ||
        lower.find("not attempted") != std::string::npos) {
        return Label::not_attempted;
    }
    if (lower.find("incorrect") != std::string::npos) return Label::incorrect;
    if (lower.find("correct") != std::string::npos) return Label::correct;
    return std::nullopt;
}

}  // namespace

Grade grade_answer(const std::string& query_id, const std::string& question,
                   const std::string& prediction, const std::string& gold,
                   std::vector<llm::Gateway*> judges, const llm::TemplateLibrary& templates) {
    const auto& tmpl = templates.get("judge");
    std::map<std::string, std::string> bindings = {{"ADD_QUESTION_HERE", question},
                                                   {"ADD_GOLD_ANSWER_HERE", gold},
                                                   {"ADD_PREDICTED_ANSWER_HERE", prediction}};
    Grade grade;
    grade.query_id = query_id;
    for (auto* judge : judges) {
        std::optional<Label> label;
        for (int attempt = 0; attempt < 2 && !label; ++attempt) {
            try {
                label = parse_label(judge->complete(tmpl, bindings).response_text);
            } catch (const llm::ProviderError&) {
                break;
            } catch (const llm::ContextLengthError&) {
                break;
            }
        }
        if (label) grade.per_judge.push_back({judge->config().model_id, *label});
    }
    if (grade.per_judge.empty()) {
        grade.failed = true;
        return grade;
    }
    for (const auto& vote : grade.per_judge) {
        switch (vote.label) {
            case Label::correct: grade.correct += 1.0; break;
            case Label::incorrect: grade.incorrect += 1.0; break;
            case Label::not_attempted: grade.not_attempted += 1.0; break;
        }
    }
    double judges_counted = static_cast<double>(grade.per_judge.size());
    grade.correct /= judges_counted;
    grade.incorrect /= judges_counted;
    grade.not_attempted /= judges_counted;
    return grade;
}

bool retrieval_correct(const std::set<std::string>& relevant,
                       const std::vector<retrieval::DocHit>& ranking, int k) {
    if (relevant.empty()) return false;
    std::set<std::string> top;
    for (std::size_t i = 0; i < ranking.size() && i < static_cast<std::size_t>(k); ++i) {
        top.insert(ranking[i].doc_id);
    }
    return std::all_of(relevant.begin(), relevant.end(),
                       [&](const std::string& doc_id) { return top.count(doc_id) > 0; });
}

std::string to_string(Interplay cell) {
    switch (cell) {
        case Interplay::redundant: return "redundant";
        case Interplay::resilience: return "resilience";
        case Interplay::augmentation: return "augmentation";
        case Interplay::hopeless: return "hopeless";
    }
    return "hopeless";
}

Interplay interplay_classify(const Grade& closed_book, bool retrieval_ok) {
    bool internal_correct = closed_book.correct >= 0.5;
    if (internal_correct) return retrieval_ok ? Interplay::redundant : Interplay::resilience;
    return retrieval_ok ? Interplay::augmentation : Interplay::hopeless;
}

namespace {

struct RateAccumulator {
    double correct = 0.0, incorrect = 0.0, not_attempted = 0.0;
    std::size_t count = 0;

    void add(const Grade& grade) {
        correct += grade.correct;
        incorrect += grade.incorrect;
        not_attempted += grade.not_attempted;
        ++count;
    }

    SliceRates rates() const {
        SliceRates r;
        r.count = count;
        if (count > 0) {
            r.correct = correct / count;
            r.incorrect = incorrect / count;
            r.not_attempted = not_attempted / count;
        }
        return r;
    }
};

}  // namespace

EvalReport aggregate_report(const std::vector<Grade>& rag_grades,
                            const std::vector<Grade>& closed_book_grades,
                            const retrieval::RetrievalRun& run, const bench::Qrels& qrels,
                            const std::vector<qgen::QASample>& queries, int k,
                            const std::string& generator_model, std::size_t failed_answers) {
    std::map<std::string, const Grade*> rag_index, closed_index;
    for (const auto& grade : rag_grades) rag_index[grade.query_id] = &grade;
    for (const auto& grade : closed_book_grades) closed_index[grade.query_id] = &grade;

    std::vector<std::string> missing;
    for (const auto& query : queries) {
        if (!rag_index.count(query.sample_id) || !closed_index.count(query.sample_id)) {
            missing.push_back(query.sample_id);
        }
    }
    if (!missing.empty()) {
        std::string ids;
        for (const auto& id : missing) ids += (ids.empty() ? "" : ", ") + id;
        throw util::Error("grades missing for queries: " + ids);
    }

    EvalReport report;
    report.k = k;
    report.generator_model = generator_model;
    report.failed_answers = failed_answers;

    std::map<std::string, RateAccumulator> slice_acc, interplay_acc;
    RateAccumulator retrieval_ok_acc, retrieval_bad_acc;

    for (const auto& query : queries) {
        const Grade* rag = rag_index.at(query.sample_id);
        const Grade* closed = closed_index.at(query.sample_id);
        if (rag->failed || closed->failed) {
            ++report.failed_grades;
            continue;
        }

        slice_acc["Overall"].add(*rag);
        if (query.attributes.false_premise) {
            slice_acc["False-premise"].add(*rag);
        } else {
            slice_acc[query.attributes.language == bench::Language::english
                          ? "Language: English"
                          : "Language: Cross"]
                .add(*rag);
            slice_acc["Freshness: " + std::to_string(query.attributes.freshness_year)].add(*rag);
            for (const auto& topic : query.attributes.topics) {
                slice_acc["Topic: " + topic].add(*rag);
            }
            slice_acc[query.attributes.hops == 2 ? "Hops: Multi" : "Hops: Single"].add(*rag);
        }

        auto ranking = run.rankings.find(query.sample_id);
        auto relevant = qrels.find(query.sample_id);
        bool retrieval_ok =
            ranking != run.rankings.end() && relevant != qrels.end() &&
            retrieval_correct(relevant->second, ranking->second, k);
        (retrieval_ok ? retrieval_ok_acc : retrieval_bad_acc).add(*rag);
        interplay_acc[geneval::to_string(interplay_classify(*closed, retrieval_ok))].add(*rag);
    }

    for (const auto& [name, acc] : slice_acc) report.slices[name] = acc.rates();
    report.when_retrieval_correct = retrieval_ok_acc.rates();
    report.when_retrieval_incorrect = retrieval_bad_acc.rates();
    for (const auto& cell :
         {Interplay::redundant, Interplay::resilience, Interplay::augmentation,
          Interplay::hopeless}) {
        std::string name = geneval::to_string(cell);
        auto hit = interplay_acc.find(name);
        report.interplay[name] = hit == interplay_acc.end() ? SliceRates{} : hit->second.rates();
    }
    return report;
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json slices_json = nlohmann::json::object();
    for (const auto& [name, rates] : slices) slices_json[name] = rates_to_json(rates);
    nlohmann::json interplay_json = nlohmann::json::object();
    for (const auto& [name, rates] : interplay) interplay_json[name] = rates_to_json(rates);
    return {{"k", k},
            {"generator_model", generator_model},
            {"slices", slices_json},
            {"retrieval_conditioned",
             {{"correct", rates_to_json(when_retrieval_correct)},
              {"incorrect", rates_to_json(when_retrieval_incorrect)}}},
            {"interplay", interplay_json},
            {"failed_answers", failed_answers},
            {"failed_grades", failed_grades}};
}

std::string EvalReport::markdown() const {
    std::string md = "# Generation evaluation (k=" + std::to_string(k) + ", model " +
                     generator_model + ")\n\n";
    md += "## Correctness by slice\n\n";
    md += "| Slice | Correct | Incorrect | Not attempted | Queries |\n";
    md += "| --- | --- | --- | --- | --- |\n";
    for (const auto& [name, rates] : slices) {
        md += "| " + name + " | " + percent(rates.correct) + " | " + percent(rates.incorrect) +
              " | " + percent(rates.not_attempted) + " | " + std::to_string(rates.count) +
              " |\n";
    }
    md += "\n## Conditioned on retrieval\n\n";
    md += "| Retrieval | Correct | Incorrect | Not attempted | Queries |\n";
    md += "| --- | --- | --- | --- | --- |\n";
    md += "| All gold docs in top-k | " + percent(when_retrieval_correct.correct) + " | " +
          percent(when_retrieval_correct.incorrect) + " | " +
          percent(when_retrieval_correct.not_attempted) + " | " +
          std::to_string(when_retrieval_correct.count) + " |\n";
    md += "| Gold docs missed | " + percent(when_retrieval_incorrect.correct) + " | " +
          percent(when_retrieval_incorrect.incorrect) + " | " +
          percent(when_retrieval_incorrect.not_attempted) + " | " +
          std::to_string(when_retrieval_incorrect.count) + " |\n";
    md += "\n## Interplay of internal knowledge and retrieval\n\n";
    md += "| Cell | Correct | Incorrect | Not attempted | Queries |\n";
    md += "| --- | --- | --- | --- | --- |\n";
    for (const auto& [name, rates] : interplay) {
        md += "| " + name + " | " + percent(rates.correct) + " | " + percent(rates.incorrect) +
              " | " + percent(rates.not_attempted) + " | " + std::to_string(rates.count) +
              " |\n";
    }
    md += "\nFailed answers: " + std::to_string(failed_answers) +
          "; failed grades: " + std::to_string(failed_grades) + "\n";
    return md;
}

}  // namespace irb::geneval
