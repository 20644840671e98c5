#include "irb/text/tokenizer.hpp"

#include <cctype>

namespace irb::text {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }
bool is_space_byte(unsigned char c) { return std::isspace(c) != 0; }

}  // namespace

std::vector<Token> WhitespacePunctTokenizer::tokenize(std::string_view text) const {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_space_byte(c)) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (is_word_byte(c)) {
            while (i < n && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
        } else {
            ++i;
        }
        out.push_back({std::string(text.substr(start, i - start)), start, i});
    }
    return out;
}

const Tokenizer& default_tokenizer() {
    static const WhitespacePunctTokenizer instance;
    return instance;
}

std::vector<std::string> index_terms(std::string_view text) {
    std::vector<std::string> out;
    for (const Token& t : default_tokenizer().tokenize(text)) {
        bool word = is_word_byte(static_cast<unsigned char>(t.text[0]));
        if (!word) continue;
        std::string low;
        low.reserve(t.text.size());
        for (char ch : t.text) {
            low += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        }
        out.push_back(std::move(low));
    }
    return out;
}

}  // namespace irb::text
