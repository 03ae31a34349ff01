#include "mevsim/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <fstream>

namespace mevsim {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

const std::vector<std::string> kColumns = {
    "block_number", "tx_index", "tx_hash", "pool_id", "direction", "input_amount",
    "output_amount", "gas_fee", "reserve_in", "reserve_out", "min_output", "venue", "day"};

double parse_double(const std::string& s, const std::string& col, size_t row) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("row " + std::to_string(row) + ": bad value '" + s +
                                 "' in column " + col);
    }
}

}  // namespace

std::vector<SwapEvent> swap_events_from_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty swap CSV");
    std::vector<std::string> header = split_csv_line(line);
    std::vector<int> col_of(kColumns.size(), -1);
    for (size_t h = 0; h < header.size(); ++h) {
        auto it = std::find(kColumns.begin(), kColumns.end(), header[h]);
        if (it == kColumns.end())
            throw std::runtime_error("unknown swap CSV column '" + header[h] + "'");
        col_of[static_cast<size_t>(it - kColumns.begin())] = static_cast<int>(h);
    }
    auto require = [&](const char* name) {
        auto it = std::find(kColumns.begin(), kColumns.end(), name);
        if (col_of[static_cast<size_t>(it - kColumns.begin())] < 0)
            throw std::runtime_error(std::string("swap CSV missing column ") + name);
    };
    for (const char* name : {"block_number", "tx_index", "pool_id", "direction",
                             "input_amount", "output_amount", "day"})
        require(name);

    auto field = [&](const std::vector<std::string>& row, const char* name) -> const std::string* {
        auto it = std::find(kColumns.begin(), kColumns.end(), name);
        int idx = col_of[static_cast<size_t>(it - kColumns.begin())];
        if (idx < 0 || static_cast<size_t>(idx) >= row.size()) return nullptr;
        return &row[static_cast<size_t>(idx)];
    };

    std::vector<SwapEvent> events;
    size_t rowno = 1;
    while (std::getline(in, line)) {
        ++rowno;
        if (line.empty()) continue;
        std::vector<std::string> row = split_csv_line(line);
        SwapEvent ev;
        ev.block_number = static_cast<long long>(parse_double(*field(row, "block_number"),
                                                              "block_number", rowno));
        ev.tx_index = static_cast<int>(parse_double(*field(row, "tx_index"), "tx_index", rowno));
        if (const std::string* s = field(row, "tx_hash")) ev.tx_hash = *s;
        ev.pool_id = *field(row, "pool_id");
        const std::string& dir = *field(row, "direction");
        if (dir == "in_to_out")
            ev.direction = SwapDirection::InToOut;
        else if (dir == "out_to_in")
            ev.direction = SwapDirection::OutToIn;
        else
            throw std::runtime_error("row " + std::to_string(rowno) + ": bad direction '" + dir +
                                     "'");
        ev.input_amount = parse_double(*field(row, "input_amount"), "input_amount", rowno);
        ev.output_amount = parse_double(*field(row, "output_amount"), "output_amount", rowno);
        if (const std::string* s = field(row, "gas_fee"); s && !s->empty())
            ev.gas_fee = parse_double(*s, "gas_fee", rowno);
        if (const std::string* s = field(row, "reserve_in"); s && !s->empty())
            ev.reserve_in = parse_double(*s, "reserve_in", rowno);
        if (const std::string* s = field(row, "reserve_out"); s && !s->empty())
            ev.reserve_out = parse_double(*s, "reserve_out", rowno);
        if (const std::string* s = field(row, "min_output"); s && !s->empty())
            ev.min_output = parse_double(*s, "min_output", rowno);
        if (const std::string* s = field(row, "venue"); s && !s->empty()) {
            ev.venue_tag = venue_from_string(*s);
            if (!ev.venue_tag)
                throw std::runtime_error("row " + std::to_string(rowno) + ": bad venue '" + *s +
                                         "'");
        }
        ev.day = *field(row, "day");
        events.push_back(std::move(ev));
    }
    return events;
}

std::vector<SwapEvent> swap_events_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return swap_events_from_csv_text(buf.str());
}

std::string matches_to_csv(const std::vector<ArbitrageMatch>& matches) {
    std::ostringstream out;
    out << "block_number,pool_id,front_index,victim_index,back_index,revenue,profit,"
           "cost_to_revenue\n";
    out.precision(17);
    for (const ArbitrageMatch& m : matches) {
        out << m.front.block_number << ',' << m.front.pool_id << ',' << m.front.tx_index << ','
            << m.victim.tx_index << ',' << m.back.tx_index << ',' << m.revenue << ',' << m.profit
            << ',' << m.cost_to_revenue << '\n';
    }
    return out.str();
}

std::vector<ArbitrageMatch> identify_arbitrages(std::vector<SwapEvent> events,
                                                double relative_tolerance) {
    std::set<std::pair<long long, int>> seen;
    for (const SwapEvent& ev : events) {
        if (!seen.insert({ev.block_number, ev.tx_index}).second)
            throw std::invalid_argument("duplicate (block, tx_index) key: block " +
                                        std::to_string(ev.block_number) + " index " +
                                        std::to_string(ev.tx_index));
    }
    std::stable_sort(events.begin(), events.end(), [](const SwapEvent& a, const SwapEvent& b) {
        if (a.block_number != b.block_number) return a.block_number < b.block_number;
        return a.tx_index < b.tx_index;
    });

    std::map<std::pair<long long, std::string>, std::vector<size_t>> groups;
    for (size_t i = 0; i < events.size(); ++i)
        groups[{events[i].block_number, events[i].pool_id}].push_back(i);

    auto amounts_equal = [&](double a, double b) {
        if (relative_tolerance <= 0.0) return a == b;
        return std::fabs(a - b) <= relative_tolerance * std::max(std::fabs(a), std::fabs(b));
    };

    std::vector<ArbitrageMatch> matches;
    for (auto& [key, idx] : groups) {
        std::vector<bool> used(idx.size(), false);  // consumed as a front or back leg
        for (size_t b = 0; b < idx.size(); ++b) {
            if (used[b]) continue;
            const SwapEvent& back = events[idx[b]];
            // earliest unused front before this back: opposite direction, the
            // back swaps exactly what the front bought
            for (size_t f = 0; f < b; ++f) {
                if (used[f]) continue;
                const SwapEvent& front = events[idx[f]];
                if (front.direction == back.direction) continue;
                if (!amounts_equal(back.input_amount, front.output_amount)) continue;
                // victims: same-direction-as-front swaps strictly between,
                // not themselves legs of an already-identified arbitrage
                std::vector<size_t> victims;
                for (size_t v = f + 1; v < b; ++v) {
                    if (used[v]) continue;
                    if (events[idx[v]].direction == front.direction) victims.push_back(v);
                }
                if (victims.empty()) continue;  // pure round trip, no insertion
                used[f] = used[b] = true;
                double gas = front.gas_fee + back.gas_fee;
                double revenue = back.output_amount - front.input_amount;
                for (size_t v : victims) {
                    ArbitrageMatch m;
                    m.front = front;
                    m.victim = events[idx[v]];
                    m.back = back;
                    m.revenue = revenue;
                    m.profit = revenue - gas;
                    m.cost_to_revenue =
                        revenue > 0.0 ? gas / revenue : std::numeric_limits<double>::quiet_NaN();
                    matches.push_back(std::move(m));
                }
                break;
            }
        }
    }
    return matches;
}

std::vector<Classification> classify_frontrunnable(const std::vector<SwapEvent>& events) {
    std::vector<Classification> out(events.size());
    for (size_t i = 0; i < events.size(); ++i) {
        const SwapEvent& ev = events[i];
        Classification& cl = out[i];
        if (!ev.reserve_in || !ev.reserve_out || !ev.min_output) continue;
        if (!(*ev.reserve_in > 0.0) || !(*ev.reserve_out > 0.0)) continue;
        cl.classifiable = true;
        PoolState pool{*ev.reserve_in, *ev.reserve_out};
        VictimOrder victim{ev.input_amount, *ev.min_output};
        FrontrunSearch fs = best_frontrun(pool, victim);
        cl.frontrunnable = fs.frontrunnable;
        cl.best_revenue = fs.best_revenue;
        cl.revenue_at_max_input = fs.revenue_at_max_input;
        cl.max_input = fs.max_input;
    }
    return out;
}

std::vector<DailyStats> daily_series(const std::vector<SwapEvent>& events,
                                     const std::vector<ArbitrageMatch>& matches,
                                     const std::vector<Classification>& classifications,
                                     bool denominator_lit_only) {
    if (classifications.size() != events.size())
        throw std::invalid_argument("classifications must align with events");

    std::set<std::pair<long long, int>> victim_keys;
    for (const ArbitrageMatch& m : matches)
        victim_keys.insert({m.victim.block_number, m.victim.tx_index});

    struct Acc {
        int frontrunnable = 0;
        int frontrun = 0;
        int frontrunnable_all = 0;
        int frontrunnable_dark = 0;
        int matches = 0;
        double ctr_lit = 0, ctr_dark = 0;
        int n_lit = 0, n_dark = 0;
    };
    std::map<std::string, Acc> days;
    for (const SwapEvent& ev : events) days[ev.day];  // every observed day appears

    for (size_t i = 0; i < events.size(); ++i) {
        const SwapEvent& ev = events[i];
        if (!classifications[i].frontrunnable) continue;
        Acc& acc = days[ev.day];
        ++acc.frontrunnable_all;
        bool dark = ev.venue_tag && *ev.venue_tag == Venue::Dark;
        if (dark) ++acc.frontrunnable_dark;
        if (denominator_lit_only && dark) continue;
        ++acc.frontrunnable;
        if (victim_keys.count({ev.block_number, ev.tx_index})) ++acc.frontrun;
    }
    for (const ArbitrageMatch& m : matches) {
        Acc& acc = days[m.front.day];
        ++acc.matches;
        if (!std::isfinite(m.cost_to_revenue)) continue;
        bool dark = m.front.venue_tag && *m.front.venue_tag == Venue::Dark;
        if (dark) {
            acc.ctr_dark += m.cost_to_revenue;
            ++acc.n_dark;
        } else {
            acc.ctr_lit += m.cost_to_revenue;
            ++acc.n_lit;
        }
    }

    std::vector<DailyStats> series;
    for (const auto& [day, acc] : days) {
        DailyStats d;
        d.day = day;
        d.frontrunnable_count = acc.frontrunnable;
        d.frontrun_count = acc.frontrun;
        d.match_count = acc.matches;
        // zero-denominator days stay absent rather than faking a zero rate
        if (acc.frontrunnable > 0)
            d.frontrun_probability = static_cast<double>(acc.frontrun) / acc.frontrunnable;
        if (acc.frontrunnable_all > 0)
            d.dark_proportion = static_cast<double>(acc.frontrunnable_dark) / acc.frontrunnable_all;
        if (acc.n_lit > 0) d.mean_cost_to_revenue_lit = acc.ctr_lit / acc.n_lit;
        if (acc.n_dark > 0) d.mean_cost_to_revenue_dark = acc.ctr_dark / acc.n_dark;
        series.push_back(std::move(d));
    }
    return series;
}

}  // namespace mevsim
