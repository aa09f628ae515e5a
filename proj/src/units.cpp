#include "mcqkd/units.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "mcqkd/errors.hpp"

namespace mcqkd {

double mhz_to_thz(FreqMhz f) { return static_cast<double>(f) * 1e-6; }

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double db_gain_factor(double db) { return std::pow(10.0, db / 10.0); }

double db_loss_factor(double db) { return std::pow(10.0, -db / 10.0); }

FreqMhz parse_ghz_to_mhz(const std::string& text) {
    const std::string err = "invalid freq_ghz value '" + text + "'";
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    std::int64_t integral = 0;
    std::size_t digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        integral = integral * 10 + (text[pos] - '0');
        ++pos;
        ++digits;
    }
    std::int64_t frac = 0;
    std::size_t frac_digits = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            if (frac_digits < 3) {
                frac = frac * 10 + (text[pos] - '0');
                ++frac_digits;
            } else if (text[pos] != '0') {
                throw ParseError(err + ": finer than 1 MHz");
            }
            ++pos;
            ++digits;
        }
    }
    if (digits == 0 || pos != text.size()) throw ParseError(err);
    while (frac_digits < 3) {
        frac *= 10;
        ++frac_digits;
    }
    FreqMhz mhz = integral * 1000 + frac;
    return negative ? -mhz : mhz;
}

std::string format_mhz_as_ghz(FreqMhz f) {
    const bool negative = f < 0;
    const FreqMhz a = negative ? -f : f;
    std::string s = negative ? "-" : "";
    s += std::to_string(a / 1000);
    FreqMhz rem = a % 1000;
    if (rem != 0) {
        std::string fr = std::to_string(rem);
        fr.insert(fr.begin(), 3 - fr.size(), '0');
        while (fr.back() == '0') fr.pop_back();
        s += "." + fr;
    }
    return s;
}

} // namespace mcqkd
