#include "qns/qns.h"

#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <string>

#include "qns/commands.hpp"
#include "qns/errors.hpp"
#include "qns/geometry.hpp"
#include "qns/radius_sets.hpp"
#include "qns/region_io.hpp"

struct qns_result {
    qns::commands::Outcome outcome;
};

struct qns_region {
    qns::Region region;
};

struct qns_radius_set {
    qns::RadiusSet set;
};

namespace {

thread_local std::string last_error;

qns_status fail(qns_status s, char const* what)
{
    last_error = what;
    return s;
}

// Runs fn, translating exceptions to status codes.
template<class Fn>
qns_status guarded(Fn&& fn)
{
    try {
        fn();
        last_error.clear();
        return QNS_OK;
    } catch (qns::InvalidInput const& e) {
        return fail(QNS_ERR_INVALID_INPUT, e.what());
    } catch (nlohmann::json::exception const& e) {
        return fail(QNS_ERR_INVALID_INPUT, e.what());
    } catch (qns::ConstructionError const& e) {
        return fail(QNS_ERR_CONSTRUCTION, e.what());
    } catch (std::exception const& e) {
        return fail(QNS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(QNS_ERR_INTERNAL, "unknown error");
    }
}

char* dup(std::string const& s)
{
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) {
        std::memcpy(p, s.data(), s.size() + 1);
    }
    return p;
}

}  // namespace

extern "C" {

char const* qns_version(void)
{
    return qns::commands::version();
}

char const* qns_last_error(void)
{
    return last_error.c_str();
}

void qns_string_free(char* s)
{
    std::free(s);
}

qns_status qns_run(char const* command, char const* config_json, qns_result** out)
{
    if (!command || !config_json || !out) {
        return fail(QNS_ERR_NULL_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        auto r = std::make_unique<qns_result>();
        r->outcome = qns::commands::run_text(command, config_json);
        *out = r.release();
    });
}

int qns_result_exit_code(qns_result const* r)
{
    return r ? r->outcome.exit_code : 2;
}

qns_status qns_result_report(qns_result const* r, int indent, char** out)
{
    if (!r || !out) {
        return fail(QNS_ERR_NULL_ARGUMENT, "null argument");
    }
    return guarded([&] { *out = dup(r->outcome.report.dump(indent >= 0 ? indent : -1)); });
}

qns_status qns_result_canonical_report(qns_result const* r, char** out)
{
    if (!r || !out) {
        return fail(QNS_ERR_NULL_ARGUMENT, "null argument");
    }
    return guarded([&] { *out = dup(qns::commands::canonical_report(r->outcome.report)); });
}

size_t qns_result_artifact_count(qns_result const* r)
{
    return r ? r->outcome.artifacts.size() : 0;
}

char const* qns_result_artifact_name(qns_result const* r, size_t i)
{
    if (!r || i >= r->outcome.artifacts.size()) {
        return nullptr;
    }
    return r->outcome.artifacts[i].name.c_str();
}

char const* qns_result_artifact_data(qns_result const* r, size_t i, size_t* size)
{
    if (!r || i >= r->outcome.artifacts.size()) {
        if (size) {
            *size = 0;
        }
        return nullptr;
    }
    auto const& d = r->outcome.artifacts[i].data;
    if (size) {
        *size = d.size();
    }
    return d.c_str();
}

void qns_result_free(qns_result* r)
{
    delete r;
}

//---------------------------------------------------------------------------//
qns_status qns_region_from_json(char const* json, qns_region** out)
{
    if (!json || !out) {
        return fail(QNS_ERR_NULL_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        auto j = nlohmann::json::parse(json);
        *out = new qns_region{qns::io::region_from_json(j)};
    });
}

qns_status qns_region_to_json(qns_region const* r, char** out)
{
    if (!r || !out) {
        return fail(QNS_ERR_NULL_ARGUMENT, "null argument");
    }
    return guarded([&] { *out = dup(qns::io::region_to_json(r->region).dump()); });
}

int qns_region_dimension(qns_region const* r)
{
    return r ? r->region.dim() : 0;
}

qns_status qns_region_measure(qns_region const* r, double* value, double* stderr_out)
{
    if (!r || !value) {
        return fail(QNS_ERR_NULL_ARGUMENT, "null argument");
    }
    return guarded([&] {
        auto m = r->region.measure();
        *value = m.value;
        if (stderr_out) {
            *stderr_out = m.stderr_;
        }
    });
}

qns_status qns_region_contains(qns_region const* r, double const* point, int* inside)
{
    if (!r || !point || !inside) {
        return fail(QNS_ERR_NULL_ARGUMENT, "null argument");
    }
    return guarded([&] {
        qns::Point p{};
        for (int i = 0; i < r->region.dim(); ++i) {
            p[i] = point[i];
        }
        *inside = r->region.contains(p) ? 1 : 0;
    });
}

void qns_region_free(qns_region* r)
{
    delete r;
}

//---------------------------------------------------------------------------//
qns_status qns_radius_set_from_json(char const* json, qns_radius_set** out)
{
    if (!json || !out) {
        return fail(QNS_ERR_NULL_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        auto j = nlohmann::json::parse(json);
        *out = new qns_radius_set{qns::radius_set_from_json(j)};
    });
}

qns_status qns_radius_set_contains(qns_radius_set const* a, double x, int* inside)
{
    if (!a || !inside) {
        return fail(QNS_ERR_NULL_ARGUMENT, "null argument");
    }
    return guarded([&] { *inside = a->set.contains(x) ? 1 : 0; });
}

qns_status qns_radius_set_classify_json(qns_radius_set const* a, char** out)
{
    if (!a || !out) {
        return fail(QNS_ERR_NULL_ARGUMENT, "null argument");
    }
    return guarded([&] { *out = dup(qns::classification_to_json(qns::classify(a->set)).dump()); });
}

qns_status qns_radius_set_rescale(qns_radius_set const* a, double alpha, double beta, qns_radius_set** out)
{
    if (!a || !out) {
        return fail(QNS_ERR_NULL_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] { *out = new qns_radius_set{a->set.rescaled(alpha, beta)}; });
}

void qns_radius_set_free(qns_radius_set* a)
{
    delete a;
}

double qns_lens_area(double r1, double r2, double d)
{
    try {
        return qns::lens_area(r1, r2, d);
    } catch (std::exception const& e) {
        last_error = e.what();
        return std::numeric_limits<double>::quiet_NaN();
    }
}

double qns_lens_constant(void)
{
    return qns::lens_constant();
}

}  // extern "C"
