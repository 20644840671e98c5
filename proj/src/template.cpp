#include "irb/llm/template.hpp"

#include <stdexcept>

#include "irb/util/fs.hpp"

namespace irb::llm {

namespace {

std::set<std::string> scan_placeholders(const std::string& body) {
    std::set<std::string> names;
    std::size_t pos = 0;
    while ((pos = body.find("[ADD", pos)) != std::string::npos) {
        std::size_t close = body.find(']', pos);
        if (close == std::string::npos) break;
        names.insert(body.substr(pos + 1, close - pos - 1));
        pos = close + 1;
    }
    return names;
}

}  // namespace

PromptTemplate PromptTemplate::load(const std::filesystem::path& file) {
    return from_string(file.stem().string(), util::read_file(file));
}

PromptTemplate PromptTemplate::from_string(std::string template_id, std::string body) {
    PromptTemplate t;
    t.template_id = std::move(template_id);
    t.body = std::move(body);
    t.required_placeholders = scan_placeholders(t.body);
    return t;
}

std::string render(const PromptTemplate& tmpl,
                   const std::map<std::string, std::string>& bindings) {
    std::string out;
    out.reserve(tmpl.body.size());
    std::size_t i = 0;
    const std::string& body = tmpl.body;
    while (i < body.size()) {
        if (body.compare(i, 4, "[ADD") == 0) {
            std::size_t close = body.find(']', i);
            if (close != std::string::npos) {
                std::string name = body.substr(i + 1, close - i - 1);
                if (tmpl.required_placeholders.count(name)) {
                    auto it = bindings.find(name);
                    if (it == bindings.end()) {
                        throw std::runtime_error("template '" + tmpl.template_id +
                                                 "': missing binding for placeholder [" + name +
                                                 "]");
                    }
                    out += it->second;  // verbatim; inserted text is never re-scanned
                    i = close + 1;
                    continue;
                }
            }
        }
        out += body[i++];
    }
    return out;
}

TemplateLibrary::TemplateLibrary(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw util::Error("prompt template directory not found: " + dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".txt") continue;
        auto t = PromptTemplate::load(entry.path());
        templates_[t.template_id] = std::move(t);
    }
    if (templates_.empty()) {
        throw util::Error("no prompt templates found under " + dir.string());
    }
}

const PromptTemplate& TemplateLibrary::get(const std::string& template_id) const {
    auto it = templates_.find(template_id);
    if (it == templates_.end()) {
        throw util::Error("unknown prompt template: " + template_id);
    }
    return it->second;
}

}  // namespace irb::llm
