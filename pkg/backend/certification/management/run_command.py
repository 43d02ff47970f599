"""Shared argument parsing and exit handling for the certify / tighten commands."""

from django.core.management.base import BaseCommand, CommandError

from certification.config import load_run_config
from certification.errors import BerezinLabError, ConfigError, ReportIOError
from certification.reporting import emit_report
from certification.runner import report_meta


class RunCommand(BaseCommand):
    mode = "certify"

    def add_arguments(self, parser):
        parser.add_argument('--config', type=str, help='Run config file (JSON or YAML)')
        parser.add_argument('--out', type=str, help='Output directory for the report')
        parser.add_argument('--format', type=str, choices=['json', 'csv'], help='Report format')
        parser.add_argument('--seed', type=int, help='Master seed')
        parser.add_argument('--trials', type=int, help='Trials per suite')
        parser.add_argument('--suite', type=str, nargs='+', help='Only run these suite ids')
        parser.add_argument('--workers', type=int, help='Worker processes for trial evaluation (1 runs in-process)')

    def run(self, config):
        """Return (reports, dominance rows or None)."""
        raise NotImplementedError

    def handle(self, *args, **options):
        overrides = {
            'mode': self.mode,
            'out': options.get('out'),
            'format': options.get('format'),
            'masterSeed': options.get('seed'),
            'trials': options.get('trials'),
            'suite': options.get('suite'),
            'workers': options.get('workers'),
        }
        try:
            config = load_run_config(options.get('config'), overrides)
        except ConfigError as exc:
            raise CommandError(f"Invalid configuration: {exc}", returncode=2)

        self.stdout.write(self.style.NOTICE(
            f"Running {len(config.suites)} suites x {config.trials} trials "
            f"on {len(config.spaces)} spaces (seed {config.master_seed})"
        ))

        try:
            reports, dominance = self.run(config)
            path = emit_report(reports, config.format, config.report_path,
                               meta=report_meta(config), dominance=dominance)
        except ReportIOError as exc:
            raise CommandError(str(exc))
        except BerezinLabError as exc:
            raise CommandError(f"Run aborted: {exc}")

        self.write_summary(reports, dominance)

        violations = sum(len(report.violations) for report in reports)
        errors = sum(len(report.errors) for report in reports)
        broken = sum(1 for row in dominance or [] if not row.holds)
        self.stdout.write(f"Report written to {path}")
        if violations or errors or broken:
            raise CommandError(
                f"{violations} violations, {errors} failed trials, {broken} dominance failures",
                returncode=1,
            )
        self.stdout.write(self.style.SUCCESS(f"✅ No violations across {len(reports)} suite reports"))

    def write_summary(self, reports, dominance):
        for report in reports:
            where = f" [{report.space}]" if report.space else ""
            line = f"{report.suite_id}{where}: {len(report.violations)} violations"
            if report.summary.min_rel_gap is not None:
                line += f", min rel gap {report.summary.min_rel_gap:.3e} (seed {report.summary.min_rel_gap_seed})"
            if report.failed:
                self.stdout.write(self.style.WARNING(f"⚠️  {line}, {len(report.errors)} errors"))
            else:
                self.stdout.write(f"  {line}")
        for row in dominance or []:
            style = self.style.SUCCESS if row.holds else self.style.WARNING
            self.stdout.write(style(
                f"{row.refined} vs {row.unrefined} [{row.space}]: "
                f"{row.refined_min_rel_gap} <= {row.unrefined_min_rel_gap}"
            ))
