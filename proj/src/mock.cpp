#include "irb/llm/mock.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "irb/text/tokenizer.hpp"
#include "irb/util/fs.hpp"
#include "irb/util/strings.hpp"

namespace irb::llm {

namespace {

std::string binding(const LlmRequest& request, const std::string& name) {
    auto it = request.bindings.find(name);
    return it == request.bindings.end() ? std::string() : it->second;
}

std::string default_keypoints(const LlmRequest& request) {
    std::string claim = binding(request, "ADD_CLAIM_HERE");
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t kp = claim.find("[KP]", pos);
        std::string piece =
            util::trim(claim.substr(pos, kp == std::string::npos ? kp : kp - pos));
        if (!piece.empty()) parts.push_back(piece);
        if (kp == std::string::npos) break;
        pos = kp + 4;
    }
    if (parts.empty()) parts.push_back(util::trim(claim));
    nlohmann::json arr = nlohmann::json::array();
    for (auto& p : parts) {
        if (!p.empty() && p.back() != '.' && p.back() != '!' && p.back() != '?') p += '.';
        arr.push_back(p);
    }
    return "##KEYPOINTS##: " + arr.dump();
}

std::string default_groundedness(const LlmRequest& request) {
    auto keypoint_words = util::content_words(binding(request, "ADD_KEYPOINT_HERE"));
    auto context_words = util::content_words(binding(request, "ADD_CONTEXT_HERE"));
    std::set<std::string> context_set(context_words.begin(), context_words.end());
    if (keypoint_words.empty()) return "Not Grounded";
    std::size_t hits = 0;
    for (const auto& w : keypoint_words) hits += context_set.count(w);
    double fraction = static_cast<double>(hits) / keypoint_words.size();
    return fraction >= 0.7 ? "Grounded" : "Not Grounded";
}

struct RelationLine {
    std::string head, head_type, relation, tail, tail_type;
    bool head_masked = false, tail_masked = false;
};

std::optional<RelationLine> parse_relation(const std::string& line) {
    auto bar1 = line.find('|');
    if (bar1 == std::string::npos) return std::nullopt;
    auto bar2 = line.find('|', bar1 + 1);
    if (bar2 == std::string::npos) return std::nullopt;
    auto split_node = [](std::string part, std::string& node, std::string& type) {
        part = util::trim(part);
        auto open = part.rfind('[');
        if (open != std::string::npos && part.back() == ']') {
            type = part.substr(open + 1, part.size() - open - 2);
            node = util::trim(part.substr(0, open));
        } else {
            node = part;
        }
    };
    RelationLine r;
    std::string head_part = line.substr(0, bar1);
    auto colon = head_part.find(':');
    if (colon != std::string::npos) head_part = head_part.substr(colon + 1);
    split_node(head_part, r.head, r.head_type);
    r.relation = util::trim(line.substr(bar1 + 1, bar2 - bar1 - 1));
    split_node(line.substr(bar2 + 1), r.tail, r.tail_type);
    r.head_masked = r.head.find("<Unknown>") != std::string::npos;
    r.tail_masked = r.tail.find("<Unknown>") != std::string::npos;
    return r;
}

// Builds a mechanical but readable question from the newest relation line,
// extending the previous intermediate question when one exists.
std::string default_question(const LlmRequest& request) {
    std::string steps = binding(request, "ADD_STEPS_HERE");
    std::string last_relation, prev_question;
    for (const auto& line : util::split(steps, '\n')) {
        std::string t = util::trim(line);
        if (util::starts_with(t, "Relation:")) last_relation = t;
        else if (util::starts_with(t, "Generated question:")) {
            // The prompt's final line is the bare cue; only completed steps
            // carry question text.
            std::string q = util::trim(t.substr(19));
            if (!q.empty()) prev_question = q;
        }
    }
    auto rel = parse_relation(last_relation);
    if (!rel) return "Generated question: What entity is being described?";
    std::string q;
    if (prev_question.empty()) {
        if (rel->head_masked) {
            q = "What " + rel->head_type + " " + rel->relation + " " + rel->tail + "?";
        } else if (rel->tail_masked) {
            q = "What " + rel->tail_type + " is the one that " + rel->head + " " +
                rel->relation + "?";
        } else {
            q = "What entity is linked by '" + rel->relation + "'?";
        }
    } else {
        if (!prev_question.empty() && prev_question.back() == '?') prev_question.pop_back();
        if (rel->head_masked || rel->tail_masked) {
            const std::string& type = rel->head_masked ? rel->head_type : rel->tail_type;
            const std::string& other = rel->head_masked ? rel->tail : rel->head;
            if (other.find("<Unknown>") != std::string::npos) {
                q = prev_question + ", involving a certain " + type + "?";
            } else {
                q = prev_question + ", connected by '" + rel->relation + "' with " + other + "?";
            }
        } else {
            q = prev_question + ", given that " + rel->head + " " + rel->relation + " " +
                rel->tail + "?";
        }
    }
    return "Generated question: " + q;
}

std::string default_judge(const LlmRequest& request) {
    auto norm = [](std::string s) {
        s = util::to_lower(util::trim(s));
        while (!s.empty() && (s.back() == '.' || s.back() == '!')) s.pop_back();
        return s;
    };
    std::string gold = norm(binding(request, "ADD_GOLD_ANSWER_HERE"));
    std::string pred = norm(binding(request, "ADD_PREDICTED_ANSWER_HERE"));
    if (pred.empty()) return "NOT_ATTEMPTED";
    bool abstained = pred.find("i don't know") != std::string::npos ||
                     pred.find("i do not know") != std::string::npos ||
                     pred.find("cannot answer") != std::string::npos ||
                     pred.find("not sure") != std::string::npos;
    if (abstained) return "NOT_ATTEMPTED";
    if (!gold.empty() && pred.find(gold) != std::string::npos) return "CORRECT";
    return "INCORRECT";
}

}  // namespace

MockLlmClient MockLlmClient::from_file(const std::filesystem::path& fixture_json) {
    MockLlmClient mock;
    nlohmann::json j = nlohmann::json::parse(util::read_file(fixture_json));
    for (const auto& entry : j.at("rules")) {
        FixtureRule rule;
        rule.template_id = entry.at("template_id").get<std::string>();
        if (entry.contains("match")) {
            for (const auto& [k, v] : entry.at("match").items())
                rule.match[k] = v.get<std::string>();
        }
        rule.response = entry.at("response").get<std::string>();
        mock.add_rule(std::move(rule));
    }
    return mock;
}

void MockLlmClient::add_rule(FixtureRule rule) { rules_.push_back(std::move(rule)); }

void MockLlmClient::fail_next(int count, bool transient) {
    fail_count_ = count;
    fail_transient_ = transient;
}

LlmResponse MockLlmClient::complete(const LlmRequest& request) const {
    LlmResponse out;
    if (fail_count_ > 0) {
        --fail_count_;
        out.error = fail_transient_ ? "injected transient failure" : "injected permanent failure";
        out.transient = fail_transient_;
        return out;
    }

    const FixtureRule* hit = nullptr;
    for (const auto& rule : rules_) {
        if (rule.template_id != request.template_id) continue;
        bool all = true;
        for (const auto& [key, needle] : rule.match) {
            auto it = request.bindings.find(key);
            if (it == request.bindings.end() || it->second.find(needle) == std::string::npos) {
                all = false;
                break;
            }
        }
        if (all) {
            hit = &rule;
            break;
        }
    }

    if (hit) {
        out.text = hit->response;
    } else if (request.template_id == "keypoints") {
        out.text = default_keypoints(request);
    } else if (request.template_id == "groundedness") {
        out.text = default_groundedness(request);
    } else if (request.template_id == "kg_extraction") {
        out.text = "```json\n[]\n```";
    } else if (request.template_id == "question_generation") {
        out.text = default_question(request);
    } else if (request.template_id == "answerability") {
        out.text = "B.";
    } else if (request.template_id == "refinement") {
        out.text = binding(request, "ADD_QUESTION_HERE");
    } else if (request.template_id == "qa_rag" || request.template_id == "qa_closed_book") {
        out.text = "I don't know";
    } else if (request.template_id == "judge") {
        out.text = default_judge(request);
    } else {
        out.text = "OK";
    }

    out.ok = true;
    out.usage.prompt_tokens =
        static_cast<long>(text::default_tokenizer().tokenize(request.prompt).size());
    out.usage.completion_tokens =
        static_cast<long>(text::default_tokenizer().tokenize(out.text).size());
    return out;
}

}  // namespace irb::llm
