#include "dnet/dnet.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "dnet/error.hpp"
#include "dnet/gains.hpp"
#include "dnet/quality.hpp"
#include "dnet/report.hpp"
#include "dnet/scramble.hpp"
#include "dnet/suites.hpp"

struct dnet_generators {
    dnet::GeneratorSet g;
};

struct dnet_points {
    dnet::NetPoints p;
};

namespace {

thread_local std::string last_error;

dnet_status fail(dnet_status code, const std::string& msg) {
    last_error = msg;
    return code;
}

template <typename Fn>
dnet_status guarded(Fn&& fn) {
    try {
        last_error.clear();
        return fn();
    } catch (const dnet::IoError& e) {
        return fail(DNET_ERR_IO, e.what());
    } catch (const dnet::ValidationError& e) {
        return fail(DNET_ERR_VALIDATION, e.what());
    } catch (const dnet::ResourceError& e) {
        return fail(DNET_ERR_RESOURCE, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(DNET_ERR_VALIDATION, e.what());
    } catch (const std::bad_alloc&) {
        return fail(DNET_ERR_RESOURCE, "out of memory");
    } catch (const std::exception& e) {
        return fail(DNET_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(DNET_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) throw dnet::ValidationError(std::string(what) + " must not be null");
}

char* copy_out(const std::string& s) {
    auto* buf = static_cast<char*>(std::malloc(s.size() + 1));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, s.data(), s.size());
    buf[s.size()] = '\0';
    return buf;
}

dnet::LoadOptions load_options(int dims, int m) {
    dnet::LoadOptions o;
    if (dims > 0) o.dims = dims;
    if (m > 0) o.m = m;
    return o;
}

dnet::GeneratorFormat to_format(dnet_format f) {
    switch (f) {
        case DNET_FORMAT_RAW: return dnet::GeneratorFormat::Raw;
        case DNET_FORMAT_DIRECTION_NUMBERS: return dnet::GeneratorFormat::DirectionNumbers;
    }
    throw dnet::ValidationError("unknown generator format");
}

dnet::ScrambleKind to_kind(dnet_scramble_kind k) {
    switch (k) {
        case DNET_SCRAMBLE_RANDOM_LINEAR: return dnet::ScrambleKind::RandomLinear;
        case DNET_SCRAMBLE_NESTED_UNIFORM: return dnet::ScrambleKind::NestedUniform;
        case DNET_SCRAMBLE_DIGITAL_SHIFT: return dnet::ScrambleKind::DigitalShift;
    }
    throw dnet::ValidationError("unknown scramble kind");
}

dnet::SubsetIndex make_index(const int* u, const int* k, std::size_t usize) {
    if (usize > 0) {
        require(u, "u");
        require(k, "k");
    }
    return {std::vector<int>(u, u + usize), std::vector<int>(k, k + usize)};
}

}  // namespace

extern "C" {

const char* dnet_version(void) { return "1.0.0"; }

const char* dnet_last_error(void) { return last_error.c_str(); }

void dnet_free(void* p) { std::free(p); }

dnet_status dnet_generators_load_file(const char* path, dnet_format format, int dims, int m, dnet_generators** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        std::ifstream in(path);
        if (!in) throw dnet::IoError(std::string("cannot open '") + path + "'");
        *out = new dnet_generators{dnet::load_generators(in, to_format(format), load_options(dims, m))};
        return DNET_OK;
    });
}

dnet_status dnet_generators_load_string(const char* text, dnet_format format, int dims, int m, dnet_generators** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        std::istringstream in(text);
        *out = new dnet_generators{dnet::load_generators(in, to_format(format), load_options(dims, m))};
        return DNET_OK;
    });
}

void dnet_generators_destroy(dnet_generators* g) { delete g; }

int dnet_generators_dims(const dnet_generators* g) { return g ? g->g.dims() : 0; }

int dnet_generators_m(const dnet_generators* g) { return g ? g->g.m() : 0; }

dnet_status dnet_generators_to_raw(const dnet_generators* g, char** text) {
    return guarded([&] {
        require(g, "generators");
        require(text, "text");
        std::ostringstream os;
        dnet::write_generators_raw(g->g, os);
        *text = copy_out(os.str());
        return DNET_OK;
    });
}

dnet_status dnet_points_generate(const dnet_generators* g, dnet_points** out) {
    return guarded([&] {
        require(g, "generators");
        require(out, "out");
        *out = new dnet_points{dnet::generate_points(g->g)};
        return DNET_OK;
    });
}

dnet_status dnet_points_scramble(const dnet_points* p, dnet_scramble_kind kind, int output_bits, uint64_t seed, dnet_points** out) {
    return guarded([&] {
        require(p, "points");
        require(out, "out");
        *out = new dnet_points{dnet::scramble(p->p, {to_kind(kind), output_bits, seed})};
        return DNET_OK;
    });
}

void dnet_points_destroy(dnet_points* p) { delete p; }

size_t dnet_points_count(const dnet_points* p) { return p ? p->p.n : 0; }

int dnet_points_dims(const dnet_points* p) { return p ? p->p.dims : 0; }

int dnet_points_bits(const dnet_points* p) { return p ? p->p.bits : 0; }

uint64_t dnet_points_numerator(const dnet_points* p, size_t i, int j) {
    if (p == nullptr || i >= p->p.n || j < 0 || j >= p->p.dims) return 0;
    return p->p.at(i, j);
}

dnet_status dnet_points_export(const dnet_points* p, dnet_point_format format, char** data, size_t* size) {
    return guarded([&] {
        require(p, "points");
        require(data, "data");
        require(size, "size");
        dnet::PointFormat f;
        switch (format) {
            case DNET_POINTS_CSV: f = dnet::PointFormat::CsvFraction; break;
            case DNET_POINTS_CSV_INT: f = dnet::PointFormat::CsvNumerator; break;
            case DNET_POINTS_BINARY: f = dnet::PointFormat::Binary; break;
            default: throw dnet::ValidationError("unknown point format");
        }
        std::ostringstream os;
        dnet::write_points(p->p, f, os);
        const auto s = os.str();
        *data = copy_out(s);
        *size = s.size();
        return DNET_OK;
    });
}

dnet_status dnet_parse_scramble_kind(const char* name, dnet_scramble_kind* out) {
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        switch (dnet::parse_scramble_kind(name)) {
            case dnet::ScrambleKind::RandomLinear: *out = DNET_SCRAMBLE_RANDOM_LINEAR; break;
            case dnet::ScrambleKind::NestedUniform: *out = DNET_SCRAMBLE_NESTED_UNIFORM; break;
            case dnet::ScrambleKind::DigitalShift: *out = DNET_SCRAMBLE_DIGITAL_SHIFT; break;
        }
        return DNET_OK;
    });
}

dnet_status dnet_t_value(const dnet_generators* g, int* t) {
    return guarded([&] {
        require(g, "generators");
        require(t, "t");
        *t = dnet::t_value(g->g);
        return DNET_OK;
    });
}

dnet_status dnet_t_star(const dnet_generators* g, const int* u, size_t usize, int* t_star) {
    return guarded([&] {
        require(g, "generators");
        require(t_star, "t_star");
        if (usize > 0) require(u, "u");
        const std::vector<int> uu(u, u + usize);
        dnet::SubsetIndex{uu, std::vector<int>(usize, 0)}.validate(g->g.dims());
        *t_star = dnet::t_star_u(g->g, uu);
        return DNET_OK;
    });
}

dnet_status dnet_gain_fast(const dnet_generators* g, const int* u, const int* k, size_t usize, int* log2_gain, int* is_zero) {
    return guarded([&] {
        require(g, "generators");
        require(log2_gain, "log2_gain");
        require(is_zero, "is_zero");
        const auto v = dnet::gain_fast(g->g, make_index(u, k, usize));
        *is_zero = v.is_zero() ? 1 : 0;
        *log2_gain = v.is_zero() ? 0 : v.log2();
        return DNET_OK;
    });
}

dnet_status dnet_max_gain(const dnet_generators* g, int* log2_gain, int* degenerate) {
    return guarded([&] {
        require(g, "generators");
        require(log2_gain, "log2_gain");
        const auto mg = dnet::max_gain(g->g);
        *log2_gain = mg.gamma.log2();
        if (degenerate) *degenerate = mg.degenerate ? 1 : 0;
        return DNET_OK;
    });
}

dnet_status dnet_analyze_json(const dnet_generators* g, int all_subsets, char** json) {
    return guarded([&] {
        require(g, "generators");
        require(json, "json");
        dnet::QualityOptions opts;
        opts.all_subsets = all_subsets != 0;
        *json = copy_out(dnet::analyze(g->g, opts).dump(2) + "\n");
        return DNET_OK;
    });
}

dnet_status dnet_gains_report(const dnet_generators* g, int max_depth, const int* subsets_flat, const size_t* subset_sizes,
                              size_t n_subsets, uint64_t budget, int threads, int csv, char** out) {
    return guarded([&] {
        require(g, "generators");
        require(out, "out");
        dnet::EnumerateOptions opts;
        opts.max_depth = max_depth;
        opts.threads = threads;
        if (budget > 0) opts.budget = budget;
        if (n_subsets > 0) require(subset_sizes, "subset_sizes");
        std::size_t offset = 0;
        for (std::size_t i = 0; i < n_subsets; ++i) {
            if (subset_sizes[i] > 0) require(subsets_flat, "subsets_flat");
            opts.u_filter.emplace_back(subsets_flat + offset, subsets_flat + offset + subset_sizes[i]);
            offset += subset_sizes[i];
        }
        const auto rep = dnet::enumerate_gains(g->g, opts);
        std::ostringstream os;
        if (csv)
            dnet::write_gain_csv(rep, os);
        else
            os << dnet::to_json(rep).dump(2) << '\n';
        *out = copy_out(os.str());
        return DNET_OK;
    });
}

dnet_status dnet_integrate_json(const dnet_generators* g, const char* integrand, dnet_scramble_kind kind, int output_bits,
                                uint64_t seed, int replicates, int threads, char** json) {
    return guarded([&] {
        require(g, "generators");
        require(integrand, "integrand");
        require(json, "json");
        const auto f = dnet::parse_integrand(integrand, g->g.dims());
        const auto points = dnet::generate_points(g->g);
        const auto est = dnet::estimate(points, {to_kind(kind), output_bits, seed}, f, replicates, threads);
        auto out = dnet::to_json(est);
        out["integrand"] = integrand;
        out["scramble"] = dnet::to_string(to_kind(kind));
        out["seed"] = seed;
        *json = copy_out(out.dump(2) + "\n");
        return DNET_OK;
    });
}

dnet_status dnet_estimate(const dnet_points* p, dnet_scramble_kind kind, int output_bits, uint64_t seed, dnet_integrand_fn f, void* user,
                          int replicates, int threads, double* mean, double* variance_of_mean) {
    return guarded([&] {
        require(p, "points");
        if (f == nullptr) throw dnet::ValidationError("integrand callback must not be null");
        require(mean, "mean");
        require(variance_of_mean, "variance_of_mean");
        const auto est = dnet::estimate(
            p->p, {to_kind(kind), output_bits, seed},
            [f, user](std::span<const double> x) { return f(x.data(), static_cast<int>(x.size()), user); }, replicates, threads);
        *mean = est.mean;
        *variance_of_mean = est.variance_of_mean;
        return DNET_OK;
    });
}

dnet_status dnet_verify_gain_identity_json(const dnet_generators* g, const int* u, const int* k, size_t usize, int replicates,
                                           dnet_scramble_kind kind, int output_bits, uint64_t seed, int threads, char** json) {
    return guarded([&] {
        require(g, "generators");
        require(json, "json");
        const auto rep = dnet::verify_gain_identity(g->g, make_index(u, k, usize), replicates, {to_kind(kind), output_bits, seed}, threads);
        *json = copy_out(dnet::to_json(rep).dump(2) + "\n");
        return DNET_OK;
    });
}

dnet_status dnet_verify_suite_json(const char* suites, int max_m, int max_s, int trials, uint64_t seed, int threads, char** json) {
    return guarded([&] {
        require(suites, "suites");
        require(json, "json");
        std::vector<std::string> names;
        std::stringstream ss(suites);
        std::string name;
        while (std::getline(ss, name, ','))
            if (!name.empty()) names.push_back(name);
        if (names.empty()) throw dnet::ValidationError("no suite selected");
        dnet::SuiteOptions opts;
        opts.max_m = max_m;
        opts.max_s = max_s;
        opts.trials = trials;
        opts.seed = seed;
        opts.threads = threads;
        const auto results = dnet::run_suites(names, opts);
        auto out = dnet::to_json(results);
        out["seed"] = seed;
        out["max_m"] = max_m;
        out["max_s"] = max_s;
        out["trials"] = trials;
        *json = copy_out(out.dump(2) + "\n");
        if (!out["passed"].get<bool>()) return fail(DNET_ERR_SUITE_FAILED, "property suite failures, see manifest");
        return DNET_OK;
    });
}

}  // extern "C"
