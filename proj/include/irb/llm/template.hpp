#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>

namespace irb::llm {

// A chat prompt stored as a UTF-8 text file with named placeholders of the
// form [ADD_CLAIM_HERE] (underscore or space separated).
struct PromptTemplate {
    std::string template_id;
    std::string body;
    std::set<std::string> required_placeholders;  // names including brackets' content

    // Loads a template file; template_id is the file stem; placeholders are
    // every bracketed [ADD ...] span found in the body.
    static PromptTemplate load(const std::filesystem::path& file);
    static PromptTemplate from_string(std::string template_id, std::string body);
};

// Exact single-pass substitution: every placeholder occurrence is replaced
// by its binding, substituted text is never re-scanned, and bindings are
// inserted verbatim (no escaping). Throws naming the placeholder when a
// required one is unbound.
std::string render(const PromptTemplate& tmpl,
                   const std::map<std::string, std::string>& bindings);

// Directory of all shipped templates, keyed by template_id.
class TemplateLibrary {
public:
    explicit TemplateLibrary(const std::filesystem::path& dir);
    const PromptTemplate& get(const std::string& template_id) const;

private:
    std::map<std::string, PromptTemplate> templates_;
};

}  // namespace irb::llm
