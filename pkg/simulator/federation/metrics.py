import csv
from dataclasses import dataclass

from simulator.errors import DataError, ParseError

COLUMNS = ('round', 'client_id', 'split', 'metric', 'value')


@dataclass(frozen=True)
class MetricRow:
    round: int
    client_id: int
    split: str
    metric: str
    value: float


class MetricsLog:
    def __init__(self):
        """Append-only stream of per-round metrics."""
        self.rows = []

    def append(self, round, client_id, split, metric, value):
        if self.rows and round < self.rows[-1].round:
            raise DataError(f"Metrics rounds must not decrease ({round} after {self.rows[-1].round}).")
        self.rows.append(MetricRow(int(round), int(client_id), split, metric, float(value)))

    def extend(self, round, client_id, split, metrics):
        for name, value in metrics.items():
            self.append(round, client_id, split, name, value)

    def select(self, metric, split=None, client_id=None):
        return [row for row in self.rows
                if row.metric == metric
                and (split is None or row.split == split)
                and (client_id is None or row.client_id == client_id)]

    def client_ids(self):
        return sorted({row.client_id for row in self.rows})

    def best(self, metric='accuracy', split='test'):
        """Highest value of ``metric`` per client."""
        best = {}
        for row in self.select(metric, split):
            best[row.client_id] = max(best.get(row.client_id, row.value), row.value)
        return dict(sorted(best.items()))

    def last(self, metric, split='test'):
        """Value of ``metric`` in the latest round it was logged, per client."""
        latest = {}
        for row in self.select(metric, split):
            latest[row.client_id] = row.value
        return dict(sorted(latest.items()))

    def write_csv(self, path):
        with open(path, 'w', newline='', encoding='utf-8') as fh:
            writer = csv.writer(fh, lineterminator='\n')
            writer.writerow(COLUMNS)
            for row in self.rows:
                writer.writerow([row.round, row.client_id, row.split, row.metric, repr(row.value)])

    @classmethod
    def read_csv(cls, path):
        log = cls()
        with open(path, newline='', encoding='utf-8') as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if tuple(header or ()) != COLUMNS:
                raise ParseError(f"{path}: header must be {','.join(COLUMNS)}.", line=1)
            for row in reader:
                try:
                    log.append(int(row[0]), int(row[1]), row[2], row[3], float(row[4]))
                except (ValueError, IndexError) as exc:
                    raise ParseError(f"{path}: {exc}", line=reader.line_num) from exc
        return log

    def __len__(self):
        return len(self.rows)
