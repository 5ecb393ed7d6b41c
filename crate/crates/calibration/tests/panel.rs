use calibration::*;

const HEADER: &str = "sector_id,roe_t0,roe_t1,labprod_t0,labprod_t1,y_t0,y_t1,l_t0,l_t1\n";

#[test]
fn reads_and_drops_bad_rows() {
    let body = "\
A,0.1,0.12,1.0,1.1,2.0,2.1,3.0,3.1
B,0.2,,1.0,1.1,2.0,2.1,3.0,3.1
C,0.3,0.2,-1.0,1.1,2.0,2.1,3.0,3.1
A,0.1,0.12,1.0,1.1,2.0,2.1,3.0,3.1
D,-0.05,0.01,1.0,1.1,2.0,2.1,3.0,3.1
E,x,0.01,1.0,1.1,2.0,2.1,3.0,3.1
";
    let (panel, report) = SectorPanel::from_reader(format!("{HEADER}{body}").as_bytes()).unwrap();
    assert_eq!(report.rows_read, 6);
    assert_eq!(report.rows_kept, 2);
    assert_eq!(report.dropped.iter().map(|d| d.0).collect::<Vec<_>>(), vec![3, 4, 5, 7]);
    assert_eq!(panel.rows[1].sector_id, "D");
    assert_eq!(panel.rows[1].roe_t0, -0.05);
}

#[test]
fn header_must_match_exactly() {
    let bad = "sector,roe_t0,roe_t1,labprod_t0,labprod_t1,y_t0,y_t1,l_t0,l_t1\nA,1,1,1,1,1,1,1,1\n";
    assert!(matches!(SectorPanel::from_reader(bad.as_bytes()), Err(CalibrationError::Header { .. })));
    let reordered = "sector_id,roe_t1,roe_t0,labprod_t0,labprod_t1,y_t0,y_t1,l_t0,l_t1\n";
    assert!(SectorPanel::from_reader(reordered.as_bytes()).is_err());
}

#[test]
fn write_then_read_round_trips() {
    let panel = synthetic_roe_panel(25, 0.1, -0.8, 0.1, 3).unwrap();
    let mut buf = Vec::new();
    panel.write_csv(&mut buf).unwrap();
    assert!(String::from_utf8(buf.clone()).unwrap().starts_with(HEADER));
    let (back, report) = SectorPanel::from_reader(buf.as_slice()).unwrap();
    assert!(report.dropped.is_empty());
    assert_eq!(back, panel);
}

#[test]
fn constructor_rejects_duplicates() {
    let row = SectorRow {
        sector_id: "A".into(),
        roe_t0: 0.1,
        roe_t1: 0.1,
        labprod_t0: 1.0,
        labprod_t1: 1.0,
        y_t0: 1.0,
        y_t1: 1.0,
        l_t0: 1.0,
        l_t1: 1.0,
    };
    assert!(SectorPanel::new(vec![row.clone(), row.clone()]).is_err());
    assert!(SectorPanel::new(vec![SectorRow { y_t0: 0.0, ..row }]).is_err());
}
