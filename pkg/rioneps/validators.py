from django.core.validators import RegexValidator
from django.core.exceptions import ValidationError
from django.utils.deconstruct import deconstructible

COLUMN_CODES = ('t', 'h', 'v', 'p')

# t=time_s,h=horizontal,v=vertical,p=pupil (names or 0-based positions)
column_map_validator = RegexValidator(
    regex=r'^\s*[thvp]\s*=\s*[^,=]+\s*(,\s*[thvp]\s*=\s*[^,=]+\s*)*$',
    message=(
        'Enter columns as code=column pairs separated by commas, '
        'e.g. t=time_s,h=horizontal,v=vertical,p=pupil.'
    ),
)

# lo:hi:step, or a comma separated list of thresholds
threshold_grid_validator = RegexValidator(
    regex=r'^\s*[^:,\s]+\s*(:\s*[^:,\s]+\s*:\s*[^:,\s]+|(,\s*[^:,\s]+\s*)*)\s*$',
    message='Enter thresholds as lo:hi:step or as a comma separated list.',
)


def parse_column_map(text):
    """'t=time_s,h=horizontal' -> {'t': 'time_s', 'h': 'horizontal'}"""
    column_map_validator(text)
    columns = {}
    for pair in text.split(','):
        code, column = (part.strip() for part in pair.split('=', 1))
        if code in columns:
            raise ValidationError(f"Column code '{code}' given more than once.")
        columns[code] = column
    if 'h' not in columns and 'v' not in columns:
        raise ValidationError("Map at least one of the h/v position columns.")
    return columns


def parse_number_list(text):
    """'0,-1' -> [0.0, -1.0]; an empty string gives []."""
    values = []
    for part in text.split(','):
        part = part.strip()
        if not part:
            continue
        try:
            values.append(float(part))
        except ValueError:
            raise ValidationError(f"'{part}' is not a number.")
    return values


@deconstructible
class SampleCountValidator:
    """
    Validator that bounds the number of samples in one request.
    """
    def __init__(self, max_count):
        self.max_count = max_count

    def __call__(self, value):
        if len(value) > self.max_count:
            raise ValidationError(
                f"At most {self.max_count} samples may be submitted per request, got {len(value)}."
            )

    def __eq__(self, other):
        return isinstance(other, SampleCountValidator) and other.max_count == self.max_count
