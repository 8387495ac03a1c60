#!/usr/bin/env python3

# Copyright (c) 2020-2021 Fpemud <fpemud@sina.com>
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
# THE SOFTWARE.



import re
import math
from ._errors import ConfigError


class ParamSpec:
    """
    A method parameter given either as a literal value or as the rule "c/h".
    """

    def __init__(self, value, per_h=False):
        self.value = float(value)
        self.per_h = per_h

    @staticmethod
    def parse(text):
        text = text.strip()
        m = re.fullmatch(r'(\S+?)\s*/\s*h', text)
        if m is not None:
            return ParamSpec(_parseFloat(m.group(1)), per_h=True)
        return ParamSpec(_parseFloat(text))

    def resolve(self, h):
        assert h > 0
        return self.value / h if self.per_h else self.value

    @property
    def label(self):
        # file name friendly
        return "%gh" % (self.value) if self.per_h else "%g" % (self.value)

    def __str__(self):
        return "%g/h" % (self.value) if self.per_h else "%g" % (self.value)

    def __eq__(self, other):
        return isinstance(other, ParamSpec) and self.value == other.value and self.per_h == other.per_h

    def __hash__(self):
        return hash((self.value, self.per_h))


class MethodParams:

    def __init__(self, gamma=0.0, eta=100.0, k=2):
        self.gamma = gamma if isinstance(gamma, ParamSpec) else ParamSpec(gamma)
        self.eta = eta if isinstance(eta, ParamSpec) else ParamSpec(eta)
        self.k = k

    @property
    def label(self):
        return "gamma%s_eta%s" % (self.gamma.label, self.eta.label)

    def __str__(self):
        return "gamma=%s, eta=%s" % (self.gamma, self.eta)

    def resolve(self, h):
        """Returns the (gamma, eta) pair used on a mesh of size h."""

        gamma = self.gamma.resolve(h)
        eta = self.eta.resolve(h)
        if not (math.isfinite(gamma) and gamma >= 0):
            raise ConfigError("invalid value %s for gamma at h=%g" % (gamma, h))
        if not (math.isfinite(eta) and eta > 0):
            raise ConfigError("invalid value %s for eta at h=%g" % (eta, h))
        return gamma, eta

    @classmethod
    def check_object(cls, obj, raise_exception=None):
        assert raise_exception is not None

        try:
            if not isinstance(obj, cls):
                raise ConfigError("invalid object type")
            if not isinstance(obj.gamma, ParamSpec) or not (math.isfinite(obj.gamma.value) and obj.gamma.value >= 0):
                raise ConfigError("invalid value for key \"gamma\"")
            if not isinstance(obj.eta, ParamSpec) or not (math.isfinite(obj.eta.value) and obj.eta.value > 0):
                raise ConfigError("invalid value for key \"eta\"")
            if isinstance(obj.k, bool) or not isinstance(obj.k, int) or obj.k < 2:
                raise ConfigError("invalid value for key \"degree\"")
            return True
        except ConfigError:
            if raise_exception:
                raise
            else:
                return False


# the four parameter combinations of the reference convergence figures
REFERENCE_SERIES = [
    (ParamSpec(0), ParamSpec(100)),
    (ParamSpec(1), ParamSpec(100)),
    (ParamSpec(10, per_h=True), ParamSpec(100)),
    (ParamSpec(10, per_h=True), ParamSpec(10, per_h=True)),
]


class StudyConfig:

    def __init__(self):
        self.h_list = [0.2, 0.1, 0.05, 0.025]

        self.gamma = ParamSpec(0)
        self.eta = ParamSpec(100)

        # list of (gamma, eta) pairs, None means the single pair above
        self.series = None

        self.degree = 2

        self.center_x = 0.5
        self.center_y = 0.5
        self.radius_squared = 0.2

        # None means 2 * degree + 2
        self.quad_degree = None

        self.rtol = 1e-10
        self.solver = "direct"             # "direct", "minres"

        self.out_dir = "cutsv-study"
        self.export_matrices = False
        self.export_vtk = True
        self.vtk_h = None                  # None means the finest mesh

        self.workers = 1
        self.verbose_level = 1

    @property
    def effective_quad_degree(self):
        return 2 * self.degree + 2 if self.quad_degree is None else self.quad_degree

    def method_params(self):
        pairs = [(self.gamma, self.eta)] if self.series is None else self.series
        return [MethodParams(g, e, self.degree) for g, e in pairs]

    @classmethod
    def check_object(cls, obj, raise_exception=None):
        assert raise_exception is not None

        try:
            if not isinstance(obj, cls):
                raise ConfigError("invalid object type")

            if not isinstance(obj.h_list, list) or len(obj.h_list) == 0:
                raise ConfigError("invalid value for key \"h_list\"")
            _checkHList(obj.h_list)

            for p in obj.method_params():
                MethodParams.check_object(p, raise_exception=True)
            labels = [p.label for p in obj.method_params()]
            if len(labels) != len(set(labels)):
                raise ConfigError("invalid value for key \"series\", duplicate parameter pair")

            if not (obj.radius_squared > 0 and math.isfinite(obj.radius_squared)):
                raise ConfigError("invalid value for key \"radius_squared\"")
            if not (math.isfinite(obj.center_x) and math.isfinite(obj.center_y)):
                raise ConfigError("invalid value for key \"center_x\" or \"center_y\"")

            if obj.quad_degree is not None and obj.quad_degree < 2 * obj.degree + 2:
                raise ConfigError("invalid value for key \"quad_degree\", at least %d is required" % (2 * obj.degree + 2))

            if not (0 < obj.rtol < 1):
                raise ConfigError("invalid value for key \"rtol\"")

            if obj.solver not in ["direct", "minres"]:
                raise ConfigError("invalid value for key \"solver\"")

            if not isinstance(obj.out_dir, str) or obj.out_dir == "":
                raise ConfigError("invalid value for key \"out_dir\"")

            if not isinstance(obj.export_matrices, bool):
                raise ConfigError("invalid value for key \"export_matrices\"")
            if not isinstance(obj.export_vtk, bool):
                raise ConfigError("invalid value for key \"export_vtk\"")
            if obj.vtk_h is not None and not any(math.isclose(obj.vtk_h, h, rel_tol=1e-9) for h in obj.h_list):
                raise ConfigError("invalid value for key \"vtk_h\", it must be one of h_list")

            if isinstance(obj.workers, bool) or not isinstance(obj.workers, int) or obj.workers < 1:
                raise ConfigError("invalid value for key \"workers\"")

            if not (0 <= obj.verbose_level <= 2):
                raise ConfigError("invalid value for key \"verbose_level\"")

            return True
        except ConfigError:
            if raise_exception:
                raise
            else:
                return False


def parse_config(text, overrides=None):
    """
    Reads the flat "key = value" format, one pair per line, "#" starts a comment.
    overrides maps keys to value strings and is applied after the file.
    """

    ret = StudyConfig()

    seen = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line == "":
            continue
        if "=" not in line:
            raise ConfigError("line %d: expected \"key = value\"" % (lineno))
        key, value = [x.strip() for x in line.split("=", 1)]
        if key in seen:
            raise ConfigError("line %d: duplicate key \"%s\"" % (lineno, key))
        seen.add(key)
        _setKey(ret, key, value, "line %d" % (lineno))

    for key, value in (overrides or {}).items():
        _setKey(ret, key, value, "command line")

    StudyConfig.check_object(ret, raise_exception=True)
    return ret


def _setKey(cfg, key, value, where):
    if key not in _PARSERS:
        raise ConfigError("%s: unknown key \"%s\"" % (where, key))
    try:
        setattr(cfg, key, _PARSERS[key](value))
    except (ValueError, ConfigError) as e:
        raise ConfigError("%s: invalid value for key \"%s\" (%s)" % (where, key, e))


def _parseFloat(text):
    text = text.strip()
    if "/" in text:
        a, b = text.split("/", 1)
        ret = float(a) / float(b)
    else:
        ret = float(text)
    if not math.isfinite(ret):
        raise ValueError("non-finite value \"%s\"" % (text))
    return ret


def _parseInt(text):
    return int(text.strip())


def _parseBool(text):
    text = text.strip().lower()
    if text in ["1", "true", "yes", "on"]:
        return True
    if text in ["0", "false", "no", "off"]:
        return False
    raise ValueError("not a boolean: \"%s\"" % (text))


def _parseOptionalFloat(text):
    return None if text.strip().lower() == "none" else _parseFloat(text)


def _parseOptionalInt(text):
    return None if text.strip().lower() == "none" else _parseInt(text)


def _parseHList(text):
    ret = [_parseFloat(x) for x in text.split(",") if x.strip() != ""]
    if len(ret) == 0:
        raise ValueError("empty list")
    _checkHList(ret)
    return ret


def _checkHList(hList):
    for h in hList:
        if not (0 < h <= 1):
            raise ConfigError("mesh size %g out of range" % (h))
        n = round(1 / h)
        if abs(n * h - 1) > 1e-9:
            raise ConfigError("mesh size %g is not the reciprocal of an integer" % (h))
    for a, b in zip(hList[:-1], hList[1:]):
        if abs(a / b - 2) > 1e-9:
            raise ConfigError("h_list must halve at every step, got %g after %g" % (b, a))


def _parseSeries(text):
    if text.strip().lower() == "reference":
        return list(REFERENCE_SERIES)
    ret = []
    for item in text.split(","):
        if item.strip() == "":
            continue
        if ":" not in item:
            raise ValueError("expected \"gamma:eta\", got \"%s\"" % (item.strip()))
        g, e = item.split(":", 1)
        ret.append((ParamSpec.parse(g), ParamSpec.parse(e)))
    if len(ret) == 0:
        raise ValueError("empty series")
    return ret


def _parseSolver(text):
    return text.strip()


_PARSERS = {
    "h_list": _parseHList,
    "gamma": ParamSpec.parse,
    "eta": ParamSpec.parse,
    "series": _parseSeries,
    "degree": _parseInt,
    "center_x": _parseFloat,
    "center_y": _parseFloat,
    "radius_squared": _parseFloat,
    "quad_degree": _parseOptionalInt,
    "rtol": _parseFloat,
    "solver": _parseSolver,
    "out_dir": lambda x: x.strip(),
    "export_matrices": _parseBool,
    "export_vtk": _parseBool,
    "vtk_h": _parseOptionalFloat,
    "workers": _parseInt,
    "verbose_level": _parseInt,
}
