#!/usr/bin/env python3
"""
Generate a visual HTML report from the Monte Carlo grid results.
Shows coverage and relative bias per cell next to the acceptance checks.
"""

import json
from pathlib import Path
from datetime import datetime

METHOD_ORDER = ("proposed", "fixed_q", "bootstrap", "beach_davidson")


def load_results():
    """Load the grid results (and the quick eval results when present)."""
    evals_dir = Path(__file__).parent / "evals"
    grid_file = evals_dir / "grid_results.json"
    if not grid_file.exists():
        raise FileNotFoundError("No grid results found. Run `python run_multi_eval.py` first.")
    with open(grid_file) as f:
        data = json.load(f)

    quick_file = evals_dir / "results.json"
    if quick_file.exists():
        with open(quick_file) as f:
            data["quick"] = json.load(f)
    return data


def _pct(value) -> str:
    return "-" if value is None else f"{100 * value:.2f}%"


def _cell_row(result: dict) -> str:
    if "error" in result:
        return f"""
        <tr class="fail">
            <td>{result['case']}</td><td>{result['n']}</td>
            <td colspan="{2 * len(METHOD_ORDER) + 1}">Error: {result['error'][:80]}</td>
        </tr>"""

    report = result["report"]
    bias = report["relative_bias"]
    coverage = report["coverage"]
    cells = "".join(
        f"<td>{_pct(bias.get(m))}</td><td>{_pct(coverage.get(m))}</td>" for m in METHOD_ORDER
    )
    status = "pass" if result["failed"] == 0 else "partial"
    icon = "✅" if result["failed"] == 0 else "⚠️"
    banded = " 🎯" if result.get("banded") else ""
    return f"""
        <tr class="{status}">
            <td>{result['case']}{banded}</td>
            <td>{result['n']}</td>
            {cells}
            <td class="status-cell">{icon}</td>
        </tr>"""


def _quick_cards(quick: dict | None) -> str:
    if not quick:
        return "<p class='muted'>No quick eval results (run <code>python run_evals.py</code>).</p>"
    cards = ""
    for r in quick.get("results", []):
        passed = r.get("passed", False)
        cards += f"""
        <div class="test-item {'test-pass' if passed else 'test-fail'}">
            <span class="test-icon">{'✅' if passed else '❌'}</span>
            <span class="test-name">{r['task'].replace('-', ' ').title()}</span>
        </div>"""
    return cards


def generate_html_report(data: dict) -> str:
    """Generate an HTML report from grid data."""

    summary = data["summary"]
    total_tests = summary["tests_passed"] + summary["tests_failed"]
    pass_rate = summary["tests_passed"] / total_tests * 100 if total_tests > 0 else 0

    case_rows = ""
    for case, stats in summary["by_case"].items():
        total = stats["passed"] + stats["failed"]
        pct = stats["passed"] / total * 100 if total > 0 else 0
        status = "pass" if stats["failed"] == 0 else "partial"
        case_rows += f"""
        <tr class="{status}">
            <td>{case}</td>
            <td>{stats['passed']}/{total}</td>
            <td>{pct:.1f}%</td>
            <td class="status-cell">{"✅" if stats["failed"] == 0 else "⚠️"}</td>
        </tr>"""

    cell_rows = "".join(_cell_row(r) for r in data["results"])
    method_headers = "".join(f"<th>RB {m}</th><th>Cov {m}</th>" for m in METHOD_ORDER)

    html = f"""<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <meta name="viewport" content="width=device-width, initial-scale=1.0">
    <title>Bottom-p Share Estimators - Grid Report</title>
    <style>
        * {{ box-sizing: border-box; margin: 0; padding: 0; }}
        body {{
            font-family: -apple-system, BlinkMacSystemFont, 'Segoe UI', Roboto, sans-serif;
            background: linear-gradient(135deg, #1a1a2e 0%, #16213e 100%);
            color: #e0e0e0;
            min-height: 100vh;
            padding: 2rem;
        }}
        .container {{ max-width: 1400px; margin: 0 auto; }}
        h1 {{ text-align: center; font-size: 2.2rem; margin-bottom: 0.5rem; color: #00d9ff; }}
        .subtitle {{ text-align: center; color: #888; margin-bottom: 2rem; }}
        .hero-stats {{
            display: grid;
            grid-template-columns: repeat(auto-fit, minmax(200px, 1fr));
            gap: 1.5rem;
            margin-bottom: 3rem;
        }}
        .stat-card {{
            background: rgba(255,255,255,0.05);
            border-radius: 12px;
            padding: 1.5rem;
            text-align: center;
            border: 1px solid rgba(255,255,255,0.1);
        }}
        .stat-value {{ font-size: 2.5rem; font-weight: bold; color: #00ff88; }}
        .stat-label {{ color: #888; margin-top: 0.5rem; }}
        .section {{ margin-bottom: 3rem; }}
        .section h2 {{
            font-size: 1.5rem;
            margin-bottom: 1rem;
            padding-bottom: 0.5rem;
            border-bottom: 2px solid rgba(255,255,255,0.1);
        }}
        table {{ width: 100%; border-collapse: collapse; font-size: 0.9rem; }}
        th, td {{ padding: 0.6rem 0.8rem; text-align: left; }}
        th {{ background: rgba(255,255,255,0.05); color: #00d9ff; }}
        tr {{ border-bottom: 1px solid rgba(255,255,255,0.05); }}
        tr.pass {{ background: rgba(0,255,136,0.05); }}
        tr.partial {{ background: rgba(255,215,0,0.05); }}
        tr.fail {{ background: rgba(255,107,107,0.08); }}
        .status-cell {{ text-align: center; font-size: 1.2rem; }}
        .test-item {{ display: flex; gap: 0.75rem; padding: 0.5rem 0; }}
        .test-fail .test-name {{ color: #ff6b6b; }}
        .muted {{ color: #888; }}
        .footer {{ text-align: center; color: #666; margin-top: 2rem; font-size: 0.85rem; }}
    </style>
</head>
<body>
    <div class="container">
        <h1>Bottom-p Share Estimators</h1>
        <p class="subtitle">Monte Carlo coverage and relative bias ({'full' if data.get('full') else 'desk'} scale, seed {data.get('seed')})</p>

        <div class="hero-stats">
            <div class="stat-card">
                <div class="stat-value">{summary['cells_passed']}/{summary['total_cells']}</div>
                <div class="stat-label">Cells passing</div>
            </div>
            <div class="stat-card">
                <div class="stat-value">{pass_rate:.1f}%</div>
                <div class="stat-label">Checks passing</div>
            </div>
        </div>

        <div class="section">
            <h2>📊 Results by Model</h2>
            <table>
                <thead>
                    <tr><th>Model</th><th>Checks Passed</th><th>Pass Rate</th><th>Status</th></tr>
                </thead>
                <tbody>
                    {case_rows}
                </tbody>
            </table>
        </div>

        <div class="section">
            <h2>🔬 Grid Cells</h2>
            <p class="muted">🎯 marks cells held to the coverage and bias bands.</p>
            <table>
                <thead>
                    <tr><th>Model</th><th>n</th>{method_headers}<th>Status</th></tr>
                </thead>
                <tbody>
                    {cell_rows}
                </tbody>
            </table>
        </div>

        <div class="section">
            <h2>🧪 Quick Evals</h2>
            {_quick_cards(data.get('quick'))}
        </div>

        <div class="footer">
            <p>Generated on {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}</p>
            <p>Grid timestamp: {data.get('timestamp', 'Unknown')}</p>
        </div>
    </div>
</body>
</html>"""

    return html


def main():
    print("📊 Generating visual grid report...")

    data = load_results()
    html = generate_html_report(data)

    output_file = Path(__file__).parent / "evals" / "report.html"
    with open(output_file, "w") as f:
        f.write(html)

    print(f"✅ Report saved to: {output_file}")
    print(f"   Open in browser: file://{output_file.absolute()}")


if __name__ == "__main__":
    main()
