"""Fixed function-word list used by gloss-overlap scoring and context windows."""

STOPWORDS = frozenset({
    # articles / determiners
    "a", "an", "the", "this", "that", "these", "those",
    # prepositions
    "of", "in", "on", "at", "to", "from", "by", "with", "for", "about",
    "into", "over", "under", "between", "through",
    # conjunctions
    "and", "or", "but", "nor", "so", "yet", "if", "because", "while", "as",
    # pronouns
    "i", "you", "he", "she", "it", "we", "they", "them", "his", "her",
    "its", "their", "my", "your", "our",
    # auxiliaries / copulas
    "be", "is", "are", "was", "were", "been", "being",
    "have", "has", "had", "do", "does", "did",
    "will", "would", "shall", "should", "can", "could", "may", "might", "must",
    # misc function words
    "not", "no", "there",
})


def is_function_word(token: str) -> bool:
    return token in STOPWORDS


def content_tokens(tokens: list[str]) -> list[str]:
    return [t for t in tokens if t not in STOPWORDS]
