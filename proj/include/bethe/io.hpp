// Copyright 2026 The bethe-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BETHE_IO_HPP
#define BETHE_IO_HPP

#include <charconv>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bethe/bethe_solver.hpp"
#include "bethe/emulator.hpp"
#include "bethe/state_factory.hpp"

namespace bethe::io {

/// %.<digits>g formatting through std::to_chars, so the result never depends on a locale.
inline std::string format_real(double v, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

/// CSV float convention: 12 significant digits.
inline std::string csv_real(double v) {
    return format_real(v, 12);
}

/// {"L":..,"M":..,"k":[..],"u":[..],"I":[..],"residual":..,"energy":..}, floats at 17 digits.
/// Counting numbers are written as numbers (half-integers exactly representable).
inline std::string roots_to_json(const BetheRootSet &r) {
    std::ostringstream os;
    auto list = [&](const std::vector<double> &v) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            os << (i ? "," : "") << format_real(v[i], 17);
        }
        os << ']';
    };
    os << "{\"L\":" << r.chain_length() << ",\"M\":" << r.magnons() << ",\"k\":";
    list(r.momenta());
    os << ",\"u\":";
    list(r.rapidities());
    os << ",\"I\":[";
    for (std::size_t i = 0; i < r.counting_numbers().size(); ++i) {
        os << (i ? "," : "") << format_real(r.counting_numbers()[i].value(), 17);
    }
    os << "],\"residual\":" << format_real(r.residual(), 17) << ",\"energy\":" << format_real(r.energy(), 17)
       << '}';
    return os.str();
}

/// Re-validates the parsed momenta; the stored residual and energy are recomputed.
inline BetheRootSet roots_from_json(const nlohmann::json &j) {
    const int L = j.at("L").get<int>();
    const int M = j.at("M").get<int>();
    auto k = j.at("k").get<std::vector<double>>();
    if (static_cast<int>(k.size()) != M) {
        throw std::invalid_argument("root JSON: M does not match the number of momenta");
    }
    std::vector<CountingNumber> counting;
    if (j.contains("I")) {
        for (double v : j.at("I").get<std::vector<double>>()) {
            counting.push_back(CountingNumber::from_double(v));
        }
    }
    return BetheRootSet::from_momenta(L, std::move(k), counting);
}

inline BetheRootSet roots_from_json(const std::string &text) {
    return roots_from_json(nlohmann::json::parse(text));
}

/// [{"positions":[..],"re":..,"im":..}, ...] in colex order.
inline nlohmann::json state_to_json(const SparseMagnonState &s) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t r = 0; r < s.size(); ++r) {
        arr.push_back({{"positions", s.positions(r)}, {"re", s.amplitude(r).real()}, {"im", s.amplitude(r).imag()}});
    }
    return arr;
}

inline SparseMagnonState state_from_json(const nlohmann::json &arr, int L) {
    if (!arr.is_array() || arr.empty()) {
        throw std::invalid_argument("state JSON must be a non-empty array");
    }
    const int M = static_cast<int>(arr.front().at("positions").size());
    SectorBasis basis(L, M);
    std::vector<Complex> amps(basis.size(), Complex(0.0, 0.0));
    for (const auto &e : arr) {
        auto x = e.at("positions").get<Positions>();
        if (static_cast<int>(x.size()) != M) {
            throw SectorMismatch("state JSON mixes magnon numbers");
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] < 0 || x[i] >= L || (i > 0 && x[i] <= x[i - 1])) {
                throw std::invalid_argument("state JSON positions must be strictly increasing in [0, L-1]");
            }
        }
        amps[basis.rank(x)] = Complex(e.at("re").get<double>(), e.at("im").get<double>());
    }
    return SparseMagnonState(L, M, std::move(amps));
}

/// L characters i_{L-1} ... i_0: the last character is site 0, '1' marks an occupied site.
inline std::string bitstring(Occupation x, int L) {
    std::string s(static_cast<std::size_t>(L), '0');
    for (int n = 0; n < L; ++n) {
        if (((x >> n) & 1U) != 0) {
            s[static_cast<std::size_t>(L - 1 - n)] = '1';
        }
    }
    return s;
}

inline Occupation parse_bitstring(const std::string &s) {
    Occupation x = 0;
    const int L = static_cast<int>(s.size());
    for (int n = 0; n < L; ++n) {
        const char c = s[static_cast<std::size_t>(L - 1 - n)];
        if (c == '1') {
            x |= Occupation{1} << n;
        } else if (c != '0') {
            throw std::invalid_argument("bitstring must contain only 0 and 1");
        }
    }
    return x;
}

/// outcome,bitstring,count. One reject row (empty bitstring), then accepted patterns
/// with non-zero count in colex order.
inline void write_shot_counts_csv(std::ostream &os, const ShotCounts &c) {
    os << "outcome,bitstring,count\n";
    os << "reject,," << c.rejects << '\n';
    for (std::size_t r = 0; r < c.accepted.size(); ++r) {
        if (c.accepted[r] != 0) {
            os << "accept," << bitstring(c.basis->occupation(r), c.L) << ',' << c.accepted[r] << '\n';
        }
    }
}

}  // namespace bethe::io

#endif  // BETHE_IO_HPP
