#include "hdg/manufactured.hpp"

#include "hdg/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace hdg
{

namespace
{

constexpr double pi = std::numbers::pi;

// Streamfunction profile t^2 (1 - t)^2 and its derivatives.
double g0(double t) { return t * t * (1 - t) * (1 - t); }
double g1(double t) { return 2 * t - 6 * t * t + 4 * t * t * t; }
double g2(double t) { return 2 - 12 * t + 12 * t * t; }
double g3(double t) { return -12 + 24 * t; }

ScalarField constant(double v)
{
    return [v](const Vec2&) { return v; };
}

bool inside_unit_square(const Vec2& x, double m)
{
    return x.x() > m && x.x() < 1 - m && x.y() > m && x.y() < 1 - m;
}

void scalar_smooth(ManufacturedCase& mc)
{
    mc.p = [](const Vec2& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
    mc.u = [](const Vec2& x) {
        return Vec2(-pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                    -pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
    };
    mc.fd_admissible = [](const Vec2& x) { return inside_unit_square(x, 0.01); };
}

void vector_smooth(ManufacturedCase& mc)
{
    const double nu = mc.nu;
    mc.u = [](const Vec2& x) {
        return Vec2(g0(x.x()) * g1(x.y()), -g1(x.x()) * g0(x.y()));
    };
    mc.sigma = [nu](const Vec2& x) {
        Mat2 s;
        s << g1(x.x()) * g1(x.y()), g0(x.x()) * g2(x.y()),
            -g2(x.x()) * g0(x.y()), -g1(x.x()) * g1(x.y());
        return Mat2(nu * s);
    };
    mc.p = [](const Vec2& x) { return std::sin(2 * pi * x.x()) * std::cos(2 * pi * x.y()); };
    mc.fd_admissible = [](const Vec2& x) { return inside_unit_square(x, 0.01); };
}

Vec2 stokes_smooth_force(const Vec2& x, double nu)
{
    const double a = x.x(), b = x.y();
    const Vec2 lap(g2(a) * g1(b) + g0(a) * g3(b), -g3(a) * g0(b) - g1(a) * g2(b));
    const Vec2 gp(2 * pi * std::cos(2 * pi * a) * std::cos(2 * pi * b),
                  -2 * pi * std::sin(2 * pi * a) * std::sin(2 * pi * b));
    return -nu * lap + gp;
}

void vector_rotation(ManufacturedCase& mc)
{
    const double nu = mc.nu;
    mc.u = [](const Vec2& x) { return Vec2(x.y(), -x.x()); };
    mc.sigma = [nu](const Vec2&) {
        Mat2 s;
        s << 0, nu, -nu, 0;
        return s;
    };
    mc.p = constant(0.0);
    mc.fd_admissible = [](const Vec2& x) { return inside_unit_square(x, 0.01); };
}

ManufacturedCase build(const std::string& name, const CaseParameters& prm)
{
    ManufacturedCase mc;
    mc.name = name;
    mc.nu = prm.nu;
    if (name == "poisson_smooth")
    {
        mc.description = "p = sin(pi x) sin(pi y), kappa = I";
        scalar_smooth(mc);
        mc.f = [](const Vec2& x) {
            return -2 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y());
        };
    }
    else if (name == "poisson_smooth_aniso")
    {
        mc.description = "p = sin(pi x) sin(pi y), kappa = diag(1, 10)";
        scalar_smooth(mc);
        mc.kappa = [](const Vec2&) { return Mat2(Eigen::Vector2d(1, 10).asDiagonal()); };
        mc.kappa_max = 10;
        mc.u = [](const Vec2& x) {
            return Vec2(-pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                        -10 * pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
        };
        mc.f = [](const Vec2& x) {
            return -11 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y());
        };
    }
    else if (name == "poisson_linear")
    {
        mc.description = "p = 1 - x";
        mc.p = [](const Vec2& x) { return 1 - x.x(); };
        mc.u = [](const Vec2&) { return Vec2(1, 0); };
        mc.f = constant(0.0);
        mc.fd_admissible = [](const Vec2& x) { return inside_unit_square(x, 0.01); };
    }
    else if (name == "poisson_mixed")
    {
        mc.description = "p = 1 - x + y/2, Neumann on x = 1";
        mc.p = [](const Vec2& x) { return 1 - x.x() + 0.5 * x.y(); };
        mc.u = [](const Vec2&) { return Vec2(1, -0.5); };
        mc.f = constant(0.0);
        mc.neumann = [](const Vec2& x) { return x.x() > 1 - 1e-12; };
        mc.p_N = constant(1.0);
        mc.fd_admissible = [](const Vec2& x) { return inside_unit_square(x, 0.01); };
    }
    else if (name == "poisson_interface")
    {
        mc.regularity = Regularity::Interface;
        mc.description = "kappa = 1 | 10 across x = 1/2, continuous flux";
        auto ki = [](double x) { return x < 0.5 ? 1.0 : 10.0; };
        auto psi = [ki](double x) { return (x - 0.5) / ki(x) + (x - 0.5) * (x - 0.5); };
        mc.kappa = [ki](const Vec2& x) { return Mat2(ki(x.x()) * Mat2::Identity()); };
        mc.kappa_max = 10;
        mc.p = [psi](const Vec2& x) { return psi(x.x()) * std::cos(pi * x.y()); };
        mc.u = [ki, psi](const Vec2& x) {
            const double k = ki(x.x());
            return Vec2(-(1 + 2 * k * (x.x() - 0.5)) * std::cos(pi * x.y()),
                        k * pi * psi(x.x()) * std::sin(pi * x.y()));
        };
        mc.f = [ki, psi](const Vec2& x) {
            return ki(x.x()) * std::cos(pi * x.y()) * (2 - pi * pi * psi(x.x()));
        };
        mc.fd_admissible = [](const Vec2& x) {
            return inside_unit_square(x, 0.01) && std::abs(x.x() - 0.5) > 0.01;
        };
    }
    else if (name == "poisson_lshape")
    {
        mc.regularity = Regularity::CornerSingular;
        mc.singular_exponent = 2.0 / 3.0;
        mc.domain = Domain::LShape;
        mc.description = "p = r^(2/3) sin(2 theta / 3) on the L-shape";
        auto angle = [](const Vec2& x) {
            double t = std::atan2(x.y(), x.x());
            return t < 0 ? t + 2 * pi : t;
        };
        mc.p = [angle](const Vec2& x) {
            const double r = x.norm();
            return r == 0 ? 0.0 : std::pow(r, 2.0 / 3.0) * std::sin(2.0 / 3.0 * angle(x));
        };
        mc.u = [angle](const Vec2& x) {
            const double r = x.norm();
            if (r == 0)
                return Vec2(0, 0);
            const double a = 2.0 / 3.0, t = angle(x);
            return Vec2(-a * std::pow(r, a - 1) * std::sin((a - 1) * t),
                        -a * std::pow(r, a - 1) * std::cos((a - 1) * t));
        };
        mc.f = constant(0.0);
        mc.fd_admissible = [](const Vec2& x) {
            const double m = 0.01;
            const bool box = std::abs(x.x()) < 1 - m && std::abs(x.y()) < 1 - m;
            const bool notch = x.x() > -m && x.y() < m;
            return box && !notch && x.norm() > 0.1;
        };
    }
    else if (name == "cdr_smooth" || name == "cdr_rotation")
    {
        mc.equation = Equation::CDR;
        scalar_smooth(mc);
        const double c = prm.reaction;
        if (name == "cdr_smooth")
        {
            const double bx = prm.beta_x, by = prm.beta_y;
            mc.description = "p = sin(pi x) sin(pi y), constant beta";
            mc.beta = [bx, by](const Vec2&) { return Vec2(bx, by); };
        }
        else
        {
            mc.description = "p = sin(pi x) sin(pi y), beta = (y, -x)";
            mc.beta = [](const Vec2& x) { return Vec2(x.y(), -x.x()); };
        }
        mc.div_beta = constant(0.0);
        mc.c = constant(c);
        const VectorField beta = mc.beta, u = mc.u;
        const ScalarField p = mc.p;
        mc.f = [beta, u, p, c](const Vec2& x) {
            return 2 * pi * pi * p(x) - beta(x).dot(u(x)) + c * p(x);
        };
    }
    else if (name == "cdr_linear")
    {
        mc.equation = Equation::CDR;
        mc.description = "p = 1 - x, beta = (1, 1), c = 1";
        mc.p = [](const Vec2& x) { return 1 - x.x(); };
        mc.u = [](const Vec2&) { return Vec2(1, 0); };
        mc.beta = [](const Vec2&) { return Vec2(1, 1); };
        mc.div_beta = constant(0.0);
        mc.c = constant(1.0);
        mc.f = [](const Vec2& x) { return -1 + (1 - x.x()); };
        mc.fd_admissible = [](const Vec2& x) { return inside_unit_square(x, 0.01); };
    }
    else if (name == "stokes_smooth")
    {
        mc.equation = Equation::Stokes;
        mc.description = "u = curl of x^2(1-x)^2 y^2(1-y)^2, p = sin(2 pi x) cos(2 pi y)";
        vector_smooth(mc);
        const double nu = mc.nu;
        mc.f_vec = [nu](const Vec2& x) { return stokes_smooth_force(x, nu); };
    }
    else if (name == "stokes_rotation")
    {
        mc.equation = Equation::Stokes;
        mc.description = "u = (y, -x), p = 0";
        vector_rotation(mc);
        mc.f_vec = [](const Vec2&) { return Vec2(0, 0); };
    }
    else if (name == "oseen_smooth" || name == "oseen_smooth_rotation")
    {
        mc.equation = Equation::Oseen;
        vector_smooth(mc);
        if (name == "oseen_smooth")
        {
            const double bx = prm.beta_x, by = prm.beta_y;
            mc.description = "Stokes smooth solution, constant beta";
            mc.beta = [bx, by](const Vec2&) { return Vec2(bx, by); };
        }
        else
        {
            mc.description = "Stokes smooth solution, beta = (y, -x)";
            mc.beta = [](const Vec2& x) { return Vec2(x.y(), -x.x()); };
        }
        mc.div_beta = constant(0.0);
        const double nu = mc.nu;
        const VectorField beta = mc.beta;
        const TensorField sigma = mc.sigma;
        mc.f_vec = [nu, beta, sigma](const Vec2& x) {
            return Vec2(stokes_smooth_force(x, nu) + sigma(x) * beta(x) / nu);
        };
    }
    else if (name == "oseen_rotation")
    {
        mc.equation = Equation::Oseen;
        mc.description = "u = (y, -x), p = 0, beta = (1, 0)";
        vector_rotation(mc);
        mc.beta = [](const Vec2&) { return Vec2(1, 0); };
        mc.div_beta = constant(0.0);
        mc.f_vec = [](const Vec2&) { return Vec2(0, -1); };
    }
    else
    {
        throw ConfigError("unknown manufactured case '" + name + "'");
    }
    return mc;
}

} // namespace

std::vector<std::string> catalog_names()
{
    return {"poisson_smooth", "poisson_smooth_aniso", "poisson_linear", "poisson_mixed",
            "poisson_interface", "poisson_lshape", "cdr_smooth", "cdr_rotation", "cdr_linear",
            "stokes_smooth", "stokes_rotation", "oseen_smooth", "oseen_smooth_rotation",
            "oseen_rotation"};
}

ManufacturedCase manufactured_case(const std::string& name, const CaseParameters& params)
{
    return build(name, params);
}

Mesh case_mesh(const ManufacturedCase& mc, int n)
{
    Mesh m = mc.domain == Domain::LShape ? generate_lshape(n) : generate_structured(n);
    if (mc.neumann)
        m.tag_boundary(mc.neumann, FacetTag::Neumann);
    return m;
}

PoissonProblem poisson_problem(const ManufacturedCase& mc, double tau)
{
    PoissonProblem pb;
    pb.kappa = mc.kappa;
    pb.kappa_min = mc.kappa_min;
    pb.kappa_max = mc.kappa_max;
    pb.f = mc.f;
    pb.p_D = mc.p;
    pb.p_N = mc.p_N;
    pb.tau.value = tau;
    return pb;
}

CdrProblem cdr_problem(const ManufacturedCase& mc, double tau)
{
    CdrProblem pb;
    static_cast<PoissonProblem&>(pb) = poisson_problem(mc, tau);
    pb.beta = mc.beta;
    pb.div_beta = mc.div_beta;
    pb.c = mc.c;
    return pb;
}

StokesProblem stokes_problem(const ManufacturedCase& mc, double tau_n, double tau_t)
{
    StokesProblem pb;
    pb.nu = mc.nu;
    pb.f = mc.f_vec;
    pb.g = mc.u;
    pb.tau_n.value = tau_n;
    pb.tau_t.value = tau_t;
    return pb;
}

OseenProblem oseen_problem(const ManufacturedCase& mc, double tau_n, double tau_t)
{
    OseenProblem pb;
    static_cast<StokesProblem&>(pb) = stokes_problem(mc, tau_n, tau_t);
    pb.beta = mc.beta;
    pb.div_beta = mc.div_beta;
    return pb;
}

namespace
{

constexpr double fd_step = 1e-3;

double richardson(const ScalarField& f, const Vec2& x, int dir)
{
    const Vec2 e = fd_step * Vec2::Unit(dir);
    const double d1 = (f(x + e) - f(x - e)) / (2 * fd_step);
    const double d2 = (f(x + 0.5 * e) - f(x - 0.5 * e)) / fd_step;
    return (4 * d2 - d1) / 3;
}

Vec2 richardson(const VectorField& f, const Vec2& x, int dir)
{
    const Vec2 e = fd_step * Vec2::Unit(dir);
    const Vec2 d1 = (f(x + e) - f(x - e)) / (2 * fd_step);
    const Vec2 d2 = (f(x + 0.5 * e) - f(x - 0.5 * e)) / fd_step;
    return (4 * d2 - d1) / 3;
}

Vec2 grad_fd(const ScalarField& p, const Vec2& x)
{
    return Vec2(richardson(p, x, 0), richardson(p, x, 1));
}

/// (J)_ab = d u_a / d x_b
Mat2 jacobian_fd(const VectorField& u, const Vec2& x)
{
    Mat2 J;
    J.col(0) = richardson(u, x, 0);
    J.col(1) = richardson(u, x, 1);
    return J;
}

double div_fd(const VectorField& u, const Vec2& x) { return jacobian_fd(u, x).trace(); }

Vec2 row_div_fd(const TensorField& s, const Vec2& x)
{
    const VectorField c0 = [&s](const Vec2& y) { return Vec2(s(y).col(0)); };
    const VectorField c1 = [&s](const Vec2& y) { return Vec2(s(y).col(1)); };
    return richardson(c0, x, 0) + richardson(c1, x, 1);
}

} // namespace

double strong_residual_fd(const ManufacturedCase& mc, int samples, unsigned seed)
{
    std::mt19937 gen(seed);
    const bool lshape = mc.domain == Domain::LShape;
    std::uniform_real_distribution<double> dist(lshape ? -1.0 : 0.0, 1.0);
    double worst = 0.0;
    int taken = 0;
    for (int attempt = 0; taken < samples && attempt < 1000 * samples; ++attempt)
    {
        const Vec2 x(dist(gen), dist(gen));
        if (mc.fd_admissible && !mc.fd_admissible(x))
            continue;
        ++taken;
        if (!is_vector_problem(mc.equation))
        {
            const TensorField kappa =
                mc.kappa ? mc.kappa : TensorField([](const Vec2&) { return Mat2::Identity().eval(); });
            const VectorField flux = [&](const Vec2& y) {
                return Vec2(-kappa(y) * grad_fd(mc.p, y));
            };
            const Vec2 u = mc.u(x);
            worst = std::max(worst, (u - flux(x)).norm() / std::max(1.0, u.norm()));
            const double f = mc.f(x);
            double r;
            if (mc.equation == Equation::CDR)
                r = div_fd(flux, x) + mc.beta(x).dot(grad_fd(mc.p, x)) + mc.c(x) * mc.p(x) - f;
            else
                r = -div_fd(flux, x) - f;
            worst = std::max(worst, std::abs(r) / std::max(1.0, std::abs(f)));
        }
        else
        {
            const double nu = mc.nu;
            const TensorField sig = [&](const Vec2& y) { return Mat2(nu * jacobian_fd(mc.u, y)); };
            const Mat2 s = mc.sigma(x);
            worst = std::max(worst, (s - sig(x)).norm() / std::max(1.0, s.norm()));
            worst = std::max(worst, std::abs(div_fd(mc.u, x)));
            Vec2 r = -row_div_fd(sig, x) + grad_fd(mc.p, x);
            if (mc.equation == Equation::Oseen)
                r += jacobian_fd(mc.u, x) * mc.beta(x);
            const Vec2 f = mc.f_vec(x);
            r -= f;
            worst = std::max(worst, r.norm() / std::max(1.0, f.norm()));
        }
    }
    return worst;
}

} // namespace hdg
