"""
report -- print bound checks as a specification
-----------------------------------------------

Every BoundReport becomes one line under a heading named after the
inequality it checks.  A run of ``rieszcrit verify all`` reads like::

  Corollary1
  - (2,2) holds over 226 samples, max ratio 0.9951
  - (2,4) holds over 226 samples, max ratio 0.8124

  Lemma3
  - holds over 10000 samples, max ratio 0.4987

  Fig3
  - does not hold over 2 samples, max ratio 1.3 (FAILED)
    fit 0.0213 k^-1.2001

``--color`` (or ``RIESZCRIT_COLOR``) marks passing lines green and failing
lines red.  You need an ANSI terminal to use this.
"""

import sys


################################################################################
## Descriptions.
################################################################################

def split_name(name):
    """Split a report name into its heading and its argument part.

    >>> split_name('corollary1(2,4)')
    ('Corollary1', '(2,4)')
    >>> split_name('lemma3')
    ('Lemma3', '')
    """
    head, sep, rest = name.partition('(')
    return head[:1].upper() + head[1:], sep + rest


def describe(report):
    """
    >>> from rieszcrit.bounds import BoundReport
    >>> describe(BoundReport('lemma4', 12, 0.25, True))
    'holds over 12 samples, max ratio 0.25'
    """
    verb = 'holds' if report.passed else 'does not hold'
    return '%s over %d samples, max ratio %.4g' % (verb, report.samples_checked,
                                                   report.max_ratio)


################################################################################
## Color helpers.
################################################################################

color_end = "\x1b[1;0m"
colors = dict(green="\x1b[1;32m", red="\x1b[1;31m", yellow="\x1b[1;33m")


def in_color(color, text):
    """Colorize text, adding color to each line so that the color shows up
    correctly with the less -R as well as more and normal shell.
    """
    return "".join("%s%s%s" % (colors[color], line, color_end)
                   for line in text.splitlines(True))


def plain(color, text):
    return text


################################################################################
## Output.
################################################################################

class ReportStream(object):
    def __init__(self, stream=None, color=False):
        self.stream = stream if stream is not None else sys.stdout
        self._colorize = in_color if color else plain
        self.current_context = None
        self.checked = 0
        self.failed = []

    def print_line(self, line=''):
        self.stream.write(line + "\n")

    def print_report(self, report):
        context, args = split_name(report.name)
        if context != self.current_context:
            self.print_line("\n%s" % context)
            self.current_context = context

        spec = describe(report)
        if args:
            spec = '%s %s' % (args, spec)
        self.checked += 1
        if report.passed:
            self.print_line(self._colorize('green', "- %s" % spec))
        else:
            self.failed.append(report)
            self.print_line(self._colorize('red', "- %s (FAILED)" % spec))
            if report.worst is not None:
                self.print_line("    worst at %s" % (report.worst,))
        for note in report.notes:
            self.print_line("    %s" % note)

    def finalize(self):
        self.print_line()
        if self.failed:
            self.print_line(self._colorize(
                'red', "%d of %d checks FAILED" % (len(self.failed), self.checked)))
        else:
            self.print_line("%d checks OK" % (self.checked,))
        return not self.failed


def print_reports(reports, stream=None, color=False):
    """Print every report; True if all of them passed."""
    out = ReportStream(stream, color)
    for report in reports:
        out.print_report(report)
    return out.finalize()
