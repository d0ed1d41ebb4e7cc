"""
Table Export Service

Exports the reproduction table to CSV and Excel formats with clean,
readable column names.
"""

import io
import logging
from typing import List

import pandas as pd

from makeev.models.schemas import TableRow

logger = logging.getLogger(__name__)

COLUMNS = {
    "family": "Family",
    "params": "Parameters",
    "m": "m",
    "l": "l",
    "k": "k",
    "orthogonal": "Orthogonal",
    "lower": "Lower Bound",
    "upper": "Upper Bound",
    "expected_d": "Expected d",
    "d": "Certified d",
    "status": "Status",
    "ok": "OK",
}


class TableExportService:
    """
    Service for exporting reproduction tables.

    Row order is kept as given, so identical tables export to identical files.
    """

    @staticmethod
    def export_to_csv(rows: List[TableRow]) -> bytes:
        """
        Export rows to CSV format.

        Args:
            rows: Reproduction table rows

        Returns:
            CSV file content as bytes
        """
        logger.info(f"Exporting {len(rows)} table rows to CSV")

        df = TableExportService._prepare_dataframe(rows)

        output = io.StringIO()
        df.to_csv(output, index=False, encoding="utf-8")
        return output.getvalue().encode("utf-8")

    @staticmethod
    def export_to_excel(rows: List[TableRow]) -> bytes:
        """
        Export rows to Excel format (.xlsx).

        Args:
            rows: Reproduction table rows

        Returns:
            Excel file content as bytes
        """
        logger.info(f"Exporting {len(rows)} table rows to Excel")

        df = TableExportService._prepare_dataframe(rows)

        output = io.BytesIO()
        with pd.ExcelWriter(output, engine="openpyxl") as writer:
            df.to_excel(writer, sheet_name="Reproduction", index=False)
        return output.getvalue()

    @staticmethod
    def _prepare_dataframe(rows: List[TableRow]) -> pd.DataFrame:
        """
        Convert rows to a DataFrame with display column names.
        Missing bounds become empty cells; booleans become Yes/No.
        """
        records = []
        for row in rows:
            record = row.model_dump()
            record["orthogonal"] = "Yes" if row.orthogonal else "No"
            record["ok"] = "Yes" if row.ok else "No"
            record["lower"] = "" if row.lower is None else row.lower
            record["upper"] = "" if row.upper is None else row.upper
            records.append(record)

        df = pd.DataFrame(records, columns=list(COLUMNS))
        return df.rename(columns=COLUMNS)


# Singleton instance
_export_service = None


def get_export_service() -> TableExportService:
    """
    Get or create singleton export service instance.
    """
    global _export_service
    if _export_service is None:
        _export_service = TableExportService()
    return _export_service
