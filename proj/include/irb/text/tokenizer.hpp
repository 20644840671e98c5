#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace irb::text {

struct Token {
    std::string text;
    std::size_t begin = 0;  // byte offset into the source
    std::size_t end = 0;    // one past the last byte
};

/// Splits text into word and punctuation tokens. Pluggable so a sub-word
/// tokenizer can be swapped in without touching chunking or indexing.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual std::vector<Token> tokenize(std::string_view text) const = 0;
};

/// The fixed default: maximal runs of alphanumeric bytes (any byte >= 0x80
/// counts as a letter, so UTF-8 words stay whole) are word tokens; every
/// other non-whitespace byte is a single punctuation token. Whitespace
/// never appears in the token stream.
class WhitespacePunctTokenizer final : public Tokenizer {
public:
    std::vector<Token> tokenize(std::string_view text) const override;
};

const Tokenizer& default_tokenizer();

/// Lower-cased word tokens only, the BM25/query view of the same stream.
std::vector<std::string> index_terms(std::string_view text);

}  // namespace irb::text
