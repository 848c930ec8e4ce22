#include "brandmatch/unicode.hpp"

#include <memory>

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "brandmatch/error.hpp"

namespace brandmatch::unicode {
namespace {

const icu::Normalizer2& nfc_normalizer() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || norm == nullptr) {
    throw Error(Errc::invalid_argument, std::string("ICU NFC normalizer unavailable: ") + u_errorName(status));
  }
  return *norm;
}

icu::UnicodeString to_icu(std::string_view text) {
  return icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

std::string to_utf8(const icu::UnicodeString& text) {
  std::string out;
  text.toUTF8String(out);
  return out;
}

icu::UnicodeString folded_nfc(icu::UnicodeString text) {
  text.foldCase(U_FOLD_CASE_DEFAULT);
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc_normalizer().normalize(text, status);
  if (U_FAILURE(status)) {
    throw Error(Errc::invalid_argument, std::string("NFC normalization failed: ") + u_errorName(status));
  }
  return out;
}

// Word break iterators are expensive to create; one per thread is cloned from
// a prototype on first use.
icu::BreakIterator& word_iterator() {
  thread_local std::unique_ptr<icu::BreakIterator> iter = [] {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> it(icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), status));
    if (U_FAILURE(status) || !it) {
      throw Error(Errc::invalid_argument, std::string("ICU word iterator unavailable: ") + u_errorName(status));
    }
    return it;
  }();
  return *iter;
}

bool is_separator(UChar32 c) {
  return u_ispunct(c) || u_isUWhiteSpace(c) || u_hasBinaryProperty(c, UCHAR_DASH);
}

void emit_piece(const icu::UnicodeString& piece, std::vector<std::string>& out) {
  if (piece.isEmpty()) return;
  bool has_letter = false;
  for (int32_t i = 0; i < piece.length(); i = piece.moveIndex32(i, 1)) {
    if (u_isUAlphabetic(piece.char32At(i))) {
      has_letter = true;
      break;
    }
  }
  if (!has_letter) return;
  out.push_back(to_utf8(folded_nfc(piece)));
}

}  // namespace

std::string fold_case(std::string_view text) {
  return to_utf8(folded_nfc(to_icu(text)));
}

std::string nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc_normalizer().normalize(to_icu(text), status);
  if (U_FAILURE(status)) {
    throw Error(Errc::invalid_argument, std::string("NFC normalization failed: ") + u_errorName(status));
  }
  return to_utf8(out);
}

std::string trim(std::string_view text) {
  icu::UnicodeString s = to_icu(text);
  int32_t begin = 0;
  int32_t end = s.length();
  while (begin < end && u_isUWhiteSpace(s.char32At(begin))) begin = s.moveIndex32(begin, 1);
  while (end > begin) {
    int32_t prev = s.moveIndex32(end, -1);
    if (!u_isUWhiteSpace(s.char32At(prev))) break;
    end = prev;
  }
  return to_utf8(icu::UnicodeString(s, begin, end - begin));
}

std::string collapse_whitespace(std::string_view text) {
  icu::UnicodeString s = to_icu(text);
  icu::UnicodeString out;
  bool pending_space = false;
  for (int32_t i = 0; i < s.length(); i = s.moveIndex32(i, 1)) {
    UChar32 c = s.char32At(i);
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.isEmpty();
      continue;
    }
    if (pending_space) out.append(static_cast<UChar>(u' '));
    pending_space = false;
    out.append(c);
  }
  return to_utf8(out);
}

std::size_t code_points(std::string_view text) {
  return static_cast<std::size_t>(to_icu(text).countChar32());
}

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  icu::UnicodeString s = to_icu(text);
  icu::BreakIterator& iter = word_iterator();
  iter.setText(s);
  int32_t start = iter.first();
  for (int32_t end = iter.next(); end != icu::BreakIterator::DONE; start = end, end = iter.next()) {
    if (iter.getRuleStatus() < UBRK_WORD_NONE_LIMIT) continue;
    icu::UnicodeString piece;
    for (int32_t i = start; i < end; i = s.moveIndex32(i, 1)) {
      UChar32 c = s.char32At(i);
      if (is_separator(c)) {
        emit_piece(piece, out);
        piece.remove();
      } else {
        piece.append(c);
      }
    }
    emit_piece(piece, out);
  }
  return out;
}

}  // namespace brandmatch::unicode
