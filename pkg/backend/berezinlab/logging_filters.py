import logging


class SuiteContextFilter(logging.Filter):
    """Attach suite/trial context to every record.

    Records emitted outside a suite run get ``suite="-"`` and ``trial="-"`` so
    the ``simple`` formatter never fails on a missing attribute. With
    ``drop_trial_debug`` the per-trial DEBUG records (those carrying a trial
    index) are suppressed.
    """

    def __init__(self, name: str = "", drop_trial_debug: bool = False):
        super().__init__(name)
        self.drop_trial_debug = drop_trial_debug

    def filter(self, record: logging.LogRecord) -> bool:
        has_trial = hasattr(record, "trial")
        if not hasattr(record, "suite"):
            record.suite = "-"
        if not has_trial:
            record.trial = "-"
        if self.drop_trial_debug and has_trial and record.levelno <= logging.DEBUG:
            return False
        return True
