#include "irb/qgen/question.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "irb/util/strings.hpp"

namespace irb::qgen {

namespace {

bool contains_ci(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return false;
    return util::to_lower(haystack).find(util::to_lower(needle)) != std::string::npos;
}

// Replaces every case-insensitive occurrence of `from`, preserving the
// replacement's own casing.
std::string replace_all_ci(const std::string& text, const std::string& from,
                           const std::string& to) {
    if (from.empty()) return text;
    std::string lower_text = util::to_lower(text);
    std::string lower_from = util::to_lower(from);
    std::string out;
    std::size_t pos = 0;
    while (true) {
        std::size_t hit = lower_text.find(lower_from, pos);
        if (hit == std::string::npos) {
            out += text.substr(pos);
            return out;
        }
        out += text.substr(pos, hit - pos);
        out += to;
        pos = hit + from.size();
    }
}

std::string first_line(const std::string& text) {
    std::string t = util::trim(text);
    std::size_t nl = t.find('\n');
    if (nl != std::string::npos) t = t.substr(0, nl);
    return util::trim(t);
}

// Models sometimes echo the "Generated question:" cue that ends the prompt;
// the question itself is whatever follows it.
std::string strip_cue(std::string line) {
    static const std::string kCue = "Generated question:";
    if (util::starts_with(line, kCue)) return util::trim(line.substr(kCue.size()));
    return line;
}

}  // namespace

nlohmann::json TraceStep::to_json() const {
    return {{"triplet", triplet.to_json()}, {"question", question}};
}

TraceStep TraceStep::from_json(const nlohmann::json& j) {
    TraceStep s;
    s.triplet = Triplet::from_json(j.at("triplet"));
    s.question = j.at("question").get<std::string>();
    return s;
}

nlohmann::json QASample::to_json() const {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& step : generation_trace) trace.push_back(step.to_json());
    return {{"sample_id", sample_id},
            {"question", question},
            {"answer", answer},
            {"variant", qgen::to_string(variant)},
            {"fact_id", fact_id},
            {"fact_ids", fact_ids},
            {"gold_doc_ids", gold_doc_ids},
            {"attributes", attributes.to_json()},
            {"generation_trace", trace}};
}

QASample QASample::from_json(const nlohmann::json& j) {
    QASample s;
    s.sample_id = j.at("sample_id").get<std::string>();
    s.question = j.at("question").get<std::string>();
    s.answer = j.at("answer").get<std::string>();
    s.variant = variant_from_string(j.at("variant").get<std::string>());
    s.fact_id = j.at("fact_id").get<std::string>();
    s.fact_ids = j.at("fact_ids").get<std::vector<std::string>>();
    s.gold_doc_ids = j.at("gold_doc_ids").get<std::vector<std::string>>();
    s.attributes = bench::SampleAttributes::from_json(j.at("attributes"));
    for (const auto& step : j.at("generation_trace")) {
        s.generation_trace.push_back(TraceStep::from_json(step));
    }
    return s;
}

nlohmann::json QgenReject::to_json() const {
    return {{"fact_id", fact_id}, {"variant", variant}, {"reason", reason}, {"detail", detail}};
}

std::string relation_line(const Triplet& t) {
    return t.head + " [" + t.head_type + "] | " + t.relation + " | " + t.tail + " [" +
           t.tail_type + "]";
}

std::string render_steps(const std::vector<TraceStep>& history, const Triplet& current) {
    std::string out;
    for (const auto& step : history) {
        out += "Relation: " + relation_line(step.triplet) + "\n";
        out += "Generated question: " + step.question + "\n\n";
    }
    out += "Relation: " + relation_line(current) + "\n";
    out += "Generated question:";
    return out;
}

std::optional<QuestionDraft> generate_question_stepwise(const MaskedGraph& masked,
                                                        llm::Gateway& gateway,
                                                        const llm::TemplateLibrary& templates) {
    const auto& tmpl = templates.get("question_generation");
    const std::string target_type = masked.masked_nodes.front().type;
    QuestionDraft draft;
    for (const auto& triplet : masked.triplets) {
        std::map<std::string, std::string> bindings = {
            {"ADD_QUESTION_TARGET_TYPE", target_type},
            {"ADD_STEPS_HERE", render_steps(draft.trace, triplet)}};
        std::string question;
        for (int attempt = 0; attempt < 2 && question.empty(); ++attempt) {
            try {
                question = strip_cue(first_line(gateway.complete(tmpl, bindings).response_text));
            } catch (const llm::ProviderError&) {
                return std::nullopt;
            } catch (const llm::ContextLengthError&) {
                return std::nullopt;
            }
        }
        if (question.empty()) return std::nullopt;
        draft.trace.push_back({triplet, question});
        draft.text = question;
    }
    if (draft.text.empty()) return std::nullopt;
    return draft;
}

std::optional<Answerability> check_answerability(const std::string& question,
                                                 llm::Gateway& gateway,
                                                 const llm::TemplateLibrary& templates) {
    const auto& tmpl = templates.get("answerability");
    std::map<std::string, std::string> bindings = {{"ADD_QUESTION_HERE", question}};
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string verdict;
        try {
            verdict = util::trim(gateway.complete(tmpl, bindings).response_text);
        } catch (const llm::ProviderError&) {
            return std::nullopt;
        } catch (const llm::ContextLengthError&) {
            return std::nullopt;
        }
        if (verdict.rfind("A.", 0) == 0) return Answerability::multiple;
        if (verdict.rfind("B.", 0) == 0) return Answerability::single;
    }
    return std::nullopt;
}

std::string refine_question(const std::string& draft, const MaskedGraph& masked,
                            const std::vector<const facts::Fact*>& source_facts,
                            const util::Date& question_date, llm::Gateway& gateway,
                            const llm::TemplateLibrary& templates) {
    std::string context;
    for (const auto* fact : source_facts) {
        for (const auto& kp : fact->keypoints) {
            if (!context.empty()) context += " ";
            context += kp.text;
        }
    }
    for (const auto& node : masked.masked_nodes) {
        context = replace_all_ci(context, node.text,
                                 "<Unknown #" + std::to_string(node.mask_index) + " (" +
                                     node.type + ")>");
    }
    nlohmann::json map_json = nlohmann::json::object();
    for (const auto& [original, surface] : masked.paraphrase_map) map_json[original] = surface;

    std::map<std::string, std::string> bindings = {
        {"ADD_QUESTION_DATE", question_date.iso()},
        {"ADD_QUESTION_TARGET_TYPE", masked.masked_nodes.front().type},
        {"ADD_KEYPOINTS_HERE", context},
        {"ADD_QUESTION_HERE", draft},
        {"ADD_PARAPHRASE_MAP", map_json.dump()}};

    std::string refined;
    try {
        refined = first_line(gateway.complete(templates.get("refinement"), bindings).response_text);
    } catch (const llm::ProviderError&) {
        return draft;
    } catch (const llm::ContextLengthError&) {
        return draft;
    }
    if (refined.empty()) return draft;
    if (refined.find("<Unknown") != std::string::npos) return draft;
    for (const auto& [original, surface] : masked.paraphrase_map) {
        if (!contains_ci(refined, surface)) return draft;  // paraphrase surface lost
    }
    return refined;
}

namespace {

std::string sample_suffix(Variant v) {
    switch (v) {
        case Variant::single_hop: return "sh";
        case Variant::multi_hop: return "mh";
        case Variant::false_premise: return "fp";
    }
    return "sh";
}

}  // namespace

GenerationResult generate_samples(const std::vector<facts::Fact>& facts, llm::Gateway& gateway,
                                  const llm::TemplateLibrary& templates,
                                  const TransformTables& tables,
                                  const NamedEntityRecognizer& ner,
                                  const GenerationConfig& config) {
    GenerationResult result;

    auto reject = [&](const std::string& fact_id, Variant variant, bool fact_level,
                      const std::string& reason, const std::string& detail) {
        result.rejects.push_back(
            {fact_id, fact_level ? "" : qgen::to_string(variant), reason, detail});
    };

    // Question pipeline shared by all variants. Appends a sample or a reject.
    auto run_pipeline = [&](const MaskedGraph& graph,
                            const std::vector<const facts::Fact*>& sources) {
        auto draft = generate_question_stepwise(graph, gateway, templates);
        if (!draft) {
            reject(graph.fact_id, graph.variant, false, "generation_fail",
                   "question generation produced no text");
            return;
        }
        auto verdict = check_answerability(draft->text, gateway, templates);
        if (!verdict) {
            reject(graph.fact_id, graph.variant, false, "generation_fail",
                   "answerability verdict unparseable");
            return;
        }
        if (*verdict == Answerability::multiple) {
            reject(graph.fact_id, graph.variant, false, "multiple_answers", draft->text);
            return;
        }
        std::string question =
            refine_question(draft->text, graph, sources, config.reference_date, gateway,
                            templates);
        if (graph.variant != Variant::false_premise && contains_ci(question, graph.answer)) {
            if (contains_ci(draft->text, graph.answer)) {
                reject(graph.fact_id, graph.variant, false, "generation_fail",
                       "answer text appears in the question");
                return;
            }
            question = draft->text;  // the leak came from refinement
        }

        QASample sample;
        sample.sample_id = graph.fact_id + ":" + sample_suffix(graph.variant);
        sample.question = question;
        sample.answer =
            graph.variant == Variant::false_premise ? "False premise question" : graph.answer;
        sample.variant = graph.variant;
        sample.fact_id = graph.fact_id;
        sample.fact_ids = graph.fact_ids;
        sample.gold_doc_ids = graph.gold_doc_ids;
        sample.attributes.hops = graph.hop_count;
        sample.attributes.false_premise = graph.variant == Variant::false_premise;
        sample.generation_trace = draft->trace;
        result.samples.push_back(std::move(sample));
    };

    // Stage 1: one pre-paraphrase single-hop graph per fact that survives
    // extraction, the coverage gate, and node selection.
    struct Single {
        MaskedGraph masked;
        const facts::Fact* fact;
    };
    std::vector<Single> singles;
    for (const auto& fact : facts) {
        auto kg = extract_kg(fact, gateway, templates.get("kg_extraction"));
        if (!kg) {
            reject(fact.fact_id, Variant::single_hop, true, "generation_fail",
                   "knowledge-graph extraction failed");
            continue;
        }
        kg->coverage = kg_coverage(*kg, fact);
        if (kg->coverage < config.coverage_threshold) {
            reject(fact.fact_id, Variant::single_hop, true, "coverage_fail",
                   "coverage " + std::to_string(kg->coverage) + " below threshold " +
                       std::to_string(config.coverage_threshold));
            continue;
        }
        auto node = select_maskable_node(*kg, fact, ner);
        if (!node) {
            reject(fact.fact_id, Variant::single_hop, true, "no_maskable_node",
                   "no head satisfies all five criteria");
            continue;
        }
        singles.push_back({mask_single_hop(*kg, fact, *node), &fact});
    }

    // Stage 2: multi-hop merges over pre-paraphrase graphs, same cohort
    // year, first match wins per kg1.
    struct Multi {
        MaskedGraph masked;
        std::vector<const facts::Fact*> sources;
    };
    std::vector<Multi> multis;
    for (const auto& first : singles) {
        for (const auto& second : singles) {
            if (first.fact->fact_id == second.fact->fact_id) continue;
            if (first.fact->cohort_year != second.fact->cohort_year) continue;
            auto merged = merge_multi_hop(first.masked, second.masked);
            if (merged) {
                multis.push_back({std::move(*merged), {first.fact, second.fact}});
                break;
            }
        }
    }

    // Stage 3: paraphrase valid-premise variants, perturb the false-premise
    // one from the unparaphrased single-hop graph, and run the question
    // pipeline on everything.
    for (const auto& single : singles) {
        run_pipeline(paraphrase_nodes(single.masked, config.reference_date, tables,
                                      &result.warnings),
                     {single.fact});
        auto fp = perturb_false_premise(single.masked, config.reference_date, tables, config.seed);
        if (fp) run_pipeline(*fp, {single.fact});
    }
    for (const auto& multi : multis) {
        run_pipeline(paraphrase_nodes(multi.masked, config.reference_date, tables,
                                      &result.warnings),
                     multi.sources);
    }
    return result;
}

}  // namespace irb::qgen
