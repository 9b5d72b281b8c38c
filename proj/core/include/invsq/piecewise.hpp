#pragma once

#include <array>
#include <vector>

namespace invsq {

/// Piecewise polynomial of degree <= 5 on consecutive intervals.
/// Each piece is stored in the scaled local variable s = (x - lo) / (hi - lo),
/// which keeps Hermite joins well conditioned for narrow pieces.
class PiecewisePoly {
  public:
    struct Piece {
        double lo = 0.0;
        double hi = 1.0;
        std::array<double, 6> c{};  // value = sum c[k] s^k
    };

    PiecewisePoly() = default;
    explicit PiecewisePoly(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {}

    void append(Piece p) { pieces_.push_back(p); }

    double lo() const { return pieces_.front().lo; }
    double hi() const { return pieces_.back().hi; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    double value(double x) const { return eval(x, 0); }
    double deriv(double x) const { return eval(x, 1); }
    double second(double x) const { return eval(x, 2); }

    /// Quintic Hermite piece matching value/first/second derivative at both ends.
    static Piece hermite(double lo, double hi, double f0, double d0, double s0,
                         double f1, double d1, double s1) {
        const double h = hi - lo;
        const double D0 = d0 * h, D1 = d1 * h;
        const double S0 = s0 * h * h, S1 = s1 * h * h;
        const double df = f1 - f0;
        Piece p;
        p.lo = lo;
        p.hi = hi;
        p.c = {f0,
               D0,
               0.5 * S0,
               10.0 * df - 6.0 * D0 - 4.0 * D1 - 1.5 * S0 + 0.5 * S1,
               -15.0 * df + 8.0 * D0 + 7.0 * D1 + 1.5 * S0 - S1,
               6.0 * df - 3.0 * (D0 + D1) - 0.5 * (S0 - S1)};
        return p;
    }

    static Piece constant(double lo, double hi, double v) {
        Piece p;
        p.lo = lo;
        p.hi = hi;
        p.c = {v, 0, 0, 0, 0, 0};
        return p;
    }

    static Piece linear(double lo, double hi, double v_lo, double slope) {
        Piece p;
        p.lo = lo;
        p.hi = hi;
        p.c = {v_lo, slope * (hi - lo), 0, 0, 0, 0};
        return p;
    }

  private:
    double eval(double x, int order) const {
        const Piece& p = find(x);
        const double h = p.hi - p.lo;
        const double s = (x - p.lo) / h;
        double v = 0.0;
        switch (order) {
            case 0:
                for (int k = 5; k >= 0; --k) v = v * s + p.c[k];
                return v;
            case 1:
                for (int k = 5; k >= 1; --k) v = v * s + k * p.c[k];
                return v / h;
            default:
                for (int k = 5; k >= 2; --k) v = v * s + k * (k - 1) * p.c[k];
                return v / (h * h);
        }
    }

    const Piece& find(double x) const {
        // Clamped lookup; pieces are few, linear scan is fine.
        if (x <= pieces_.front().hi) return pieces_.front();
        for (const Piece& p : pieces_)
            if (x <= p.hi) return p;
        return pieces_.back();
    }

    std::vector<Piece> pieces_;
};

/// C^2 ramp from (0,0,0) at x=lo to (1,0,0) at x=hi: the quintic smoothstep.
inline PiecewisePoly smoothstep(double lo, double hi) {
    PiecewisePoly pp;
    pp.append(PiecewisePoly::hermite(lo, hi, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0));
    return pp;
}

}  // namespace invsq
