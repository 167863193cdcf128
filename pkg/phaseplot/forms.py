"""Job configuration.

Every command-line job is a form: declared defaults, then values from an
optional ``key = value`` config file, then command-line flags, with later
sources winning. Unknown config keys and invalid values are usage errors.
"""
import logging
from pathlib import Path
from typing import Optional

from django import forms
from django.conf import settings
from django.core.exceptions import NON_FIELD_ERRORS
from dotenv import dotenv_values

from .color import parse_scheme
from .demos import DEMOS
from .exceptions import ExpressionSyntaxError, JobConfigError
from .expr import parse
from .flow import MAX_ORBIT_STEPS, Direction
from .geometry import Disk, Frame, Rect
from .render import WRITERS

logger = logging.getLogger(__name__)


def parse_complex(text: str) -> complex:
    """'0.5', '-0.3-0.3i', 'i' and the Python 'j' spelling."""
    return complex(str(text).strip().replace(' ', '').replace('i', 'j'))


class ExpressionField(forms.Field):

    def to_python(self, value):
        if value in self.empty_values:
            return None
        try:
            return parse(str(value))
        except ExpressionSyntaxError as exc:
            raise forms.ValidationError(exc.message, code='syntax')


class ComplexField(forms.Field):

    def to_python(self, value):
        if value in self.empty_values:
            return None
        try:
            return parse_complex(value)
        except ValueError:
            raise forms.ValidationError(f"'{value}' is not a complex number", code='invalid')


class ComplexListField(forms.Field):
    """Comma-separated complex numbers."""

    def to_python(self, value):
        if value in self.empty_values:
            return []
        try:
            return [parse_complex(item) for item in str(value).split(',') if item.strip()]
        except ValueError:
            raise forms.ValidationError(f"'{value}' is not a list of complex numbers", code='invalid')


class SingularityListField(forms.Field):
    """Comma-separated 'location[:order]' items; the order defaults to 1."""

    def to_python(self, value):
        if value in self.empty_values:
            return []
        items = []
        for item in str(value).split(','):
            if not item.strip():
                continue
            location, _, order = item.partition(':')
            try:
                items.append((parse_complex(location), int(order or 1)))
            except ValueError:
                raise forms.ValidationError(f"'{item.strip()}' is not 'location[:order]'", code='invalid')
            if items[-1][1] < 1:
                raise forms.ValidationError(f"order of '{item.strip()}' must be positive", code='invalid')
        return items


class FloatListField(forms.Field):

    def to_python(self, value):
        if value in self.empty_values:
            return []
        try:
            return [float(item) for item in str(value).split(',') if item.strip()]
        except ValueError:
            raise forms.ValidationError(f"'{value}' is not a list of numbers", code='invalid')


class BoundsField(forms.Field):
    """'xmin,xmax,ymin,ymax' as a Rect."""

    def to_python(self, value):
        if value in self.empty_values:
            return None
        try:
            xmin, xmax, ymin, ymax = (float(part) for part in str(value).split(','))
            return Rect(xmin=xmin, xmax=xmax, ymin=ymin, ymax=ymax)
        except ValueError as exc:
            raise forms.ValidationError(
                f"'{value}' is not xmin,xmax,ymin,ymax with xmin < xmax and ymin < ymax",
                code='invalid') from exc


class DomainField(BoundsField):
    """'disk' for the closed unit disk, otherwise bounds."""

    def to_python(self, value):
        if str(value).strip().lower() == 'disk':
            return Disk()
        return super().to_python(value)


class ResolutionField(forms.Field):
    """'WxH' as a (width, height) pair."""

    def to_python(self, value):
        if value in self.empty_values:
            return None
        try:
            width, height = (int(part) for part in str(value).lower().split('x'))
        except ValueError:
            raise forms.ValidationError(f"'{value}' is not WxH", code='invalid')
        if width < 1 or height < 1:
            raise forms.ValidationError('resolution must be positive', code='invalid')
        return width, height


def _frame(bounds: Rect, resolution) -> Frame:
    xres, yres = resolution
    return Frame(xmin=bounds.xmin, xmax=bounds.xmax, ymin=bounds.ymin, ymax=bounds.ymax,
                 xres=xres, yres=yres)


class JobForm(forms.Form):

    threads = forms.IntegerField(required=False, min_value=1)

    @classmethod
    def defaults(cls) -> dict:
        data = {}
        for name, field in cls.base_fields.items():
            initial = field.initial() if callable(field.initial) else field.initial
            if initial is not None:
                data[name] = initial
        return data

    @classmethod
    def read_config(cls, path) -> dict:
        path = Path(path)
        if not path.is_file():
            raise JobConfigError(f"config file {path} does not exist")
        values = {
            key.strip().lower().replace('-', '_'): value
            for key, value in dotenv_values(path).items()
        }
        unknown = sorted(set(values) - set(cls.base_fields))
        if unknown:
            raise JobConfigError(f"unknown config key(s) in {path}: {', '.join(unknown)}")
        return values

    @classmethod
    def from_options(cls, options: dict, config: Optional[str] = None) -> 'JobForm':
        data = cls.defaults()
        if config:
            data.update(cls.read_config(config))
        data.update({
            name: value for name, value in options.items()
            if name in cls.base_fields and value is not None
        })
        form = cls(data=data)
        if not form.is_valid():
            name, errors = next(iter(form.errors.items()))
            prefix = '' if name == NON_FIELD_ERRORS else f"{name.replace('_', '-')}: "
            raise JobConfigError(f"{prefix}{errors[0]}")
        logger.debug(f"{cls.__name__}: {sorted(data)}")
        return form


class ExpressionJobForm(JobForm):

    function = ExpressionField()


class RenderJobForm(ExpressionJobForm):

    frame = BoundsField(initial='-2,2,-2,2')
    res = ResolutionField(initial='400x400')
    scheme = forms.CharField(initial='plain')
    output = forms.CharField()
    supersample = forms.BooleanField(required=False)
    highlight_saddles = forms.BooleanField(required=False)

    def clean_scheme(self):
        try:
            return parse_scheme(self.cleaned_data['scheme'])
        except JobConfigError as exc:
            raise forms.ValidationError(exc.message)

    def clean_output(self):
        output = Path(self.cleaned_data['output'])
        if output.suffix.lower() not in WRITERS:
            raise forms.ValidationError(f"unsupported image format '{output.suffix}' (use .ppm or .png)")
        return output

    def clean(self):
        cleaned_data = super().clean()
        if cleaned_data.get('frame') and cleaned_data.get('res'):
            cleaned_data['window'] = _frame(cleaned_data['frame'], cleaned_data['res'])
        return cleaned_data


class CountJobForm(ExpressionJobForm):

    rect = BoundsField(initial='-2,2,-2,2')


class LocateJobForm(CountJobForm):

    min_box = forms.FloatField(initial=1e-3, min_value=1e-12)


class DensityJobForm(ExpressionJobForm):

    point = ComplexField()


class WindingJobForm(ExpressionJobForm):

    center = ComplexField(initial='0')
    radius = forms.FloatField(initial=1.0, min_value=1e-12)


class ProbeJobForm(ExpressionJobForm):

    center = ComplexField(initial='0')
    color = ComplexField(initial='1')
    radii = FloatListField(initial='0.2,0.1,0.05')

    def clean_color(self):
        color = self.cleaned_data['color']
        if color == 0:
            raise forms.ValidationError('the probe colour must be a nonzero complex number')
        return color

    def clean_radii(self):
        radii = self.cleaned_data['radii']
        if not radii:
            raise forms.ValidationError('at least one radius is required')
        if radii[-1] <= 0 or any(a <= b for a, b in zip(radii, radii[1:])):
            raise forms.ValidationError('radii must be positive and strictly descending')
        return radii


class PeriodJobForm(ExpressionJobForm):

    periods = ComplexListField(required=False)
    rect = BoundsField(initial='-1,1,-1,1')

    def clean_periods(self):
        periods = self.cleaned_data['periods']
        if any(p == 0 for p in periods):
            raise forms.ValidationError('period candidates must be nonzero')
        return periods


class OrbitJobForm(ExpressionJobForm):

    starts = ComplexListField()
    direction = forms.ChoiceField(choices=[(d.value, d.value) for d in Direction],
                                  initial=Direction.FORWARD.value)
    domain = DomainField(initial='disk')
    max_steps = forms.IntegerField(initial=MAX_ORBIT_STEPS, min_value=1)


class MeasureJobForm(ExpressionJobForm):

    bins = forms.IntegerField(initial=4, min_value=1)
    center = ComplexField(initial='0')
    radius = forms.FloatField(initial=1.0, min_value=1e-12)
    samples = forms.IntegerField(initial=256, min_value=3)


class BasinJobForm(JobForm):

    zeros = SingularityListField()
    c = ComplexField(initial='1')
    res = ResolutionField(initial='200x200')
    output = forms.CharField(required=False)

    def clean(self):
        cleaned_data = super().clean()
        if cleaned_data.get('res'):
            disk = Rect(xmin=-1.0, xmax=1.0, ymin=-1.0, ymax=1.0)
            cleaned_data['window'] = _frame(disk, cleaned_data['res'])
        return cleaned_data


class ColoringJobForm(JobForm):

    coloring = forms.CharField()

    def clean_coloring(self):
        path = Path(self.cleaned_data['coloring'])
        if not path.is_file():
            raise forms.ValidationError(f"boundary colouring file {path} does not exist")
        return path


class BoundarySolveJobForm(ColoringJobForm):

    zeros = SingularityListField(required=False)
    poles = SingularityListField(required=False)
    res = ResolutionField(initial='200x200')
    output = forms.CharField(required=False)

    def clean(self):
        cleaned_data = super().clean()
        if cleaned_data.get('res'):
            disk = Rect(xmin=-1.0, xmax=1.0, ymin=-1.0, ymax=1.0)
            cleaned_data['window'] = _frame(disk, cleaned_data['res'])
        return cleaned_data


class BoundarySampleJobForm(ExpressionJobForm):

    samples = forms.IntegerField(initial=256, min_value=64)
    output = forms.CharField()

    def clean_samples(self):
        samples = self.cleaned_data['samples']
        if samples & (samples - 1):
            raise forms.ValidationError(f"the number of samples must be a power of two, got {samples}")
        return samples


class DemoJobForm(JobForm):

    name = forms.ChoiceField(choices=[(name, name) for name in sorted(DEMOS)])
    output_dir = forms.CharField(initial=lambda: settings.PHASEPLOT_OUTPUT_DIR)
    res = forms.IntegerField(required=False, min_value=16)
