//! HTTP session API.
//!
//! Sessions live in memory; each one is locked for the duration of a
//! request, so requests against the same session are serialized. Finished
//! sessions append their transcript to the log file, if one is configured.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use clarisql::agent::{AgentConfig, AgentError, Feedback, Session, Transcript};
use clarisql::db::{execute, Cell, Table, TableStore};
use clarisql::detector::DetectorConfig;
use clarisql::nlg::Nlg;
use clarisql::parser::BaseParser;
use clarisql::sql::{render_sql, Mode, SqlQuery};
use serde::{Deserialize, Serialize};

/// Preview rows per table when the request names none.
pub const DEFAULT_PREVIEW_ROWS: usize = 3;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
        }
    }

    fn validation(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "validation", message)
    }

    fn agent(e: AgentError) -> Self {
        match e {
            AgentError::Closed => Self::new(StatusCode::CONFLICT, "session_closed", e.to_string()),
            AgentError::NoPendingQuestion => Self::new(StatusCode::CONFLICT, "no_pending_question", e.to_string()),
            other => Self::new(StatusCode::INTERNAL_SERVER_ERROR, "agent_error", other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({"error": {"code": self.code, "message": self.message}});
        (self.status, Json(body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::validation(r.body_text())
    }
}

struct Live {
    session: Session,
    created_at: DateTime<Utc>,
    updated_at: DateTime<Utc>,
    logged: bool,
}

pub struct AppState {
    store: TableStore,
    tables: HashMap<String, Arc<Table>>,
    parser: Arc<dyn BaseParser>,
    nlg: Arc<Nlg>,
    defaults: AgentConfig,
    sessions: RwLock<HashMap<String, Arc<Mutex<Live>>>>,
    log: Option<Mutex<File>>,
}

impl AppState {
    pub fn new(store: TableStore, parser: Arc<dyn BaseParser>, nlg: Arc<Nlg>, defaults: AgentConfig) -> Self {
        let tables = store.iter().map(|t| (t.id.clone(), Arc::new(t.clone()))).collect();
        AppState {
            store,
            tables,
            parser,
            nlg,
            defaults,
            sessions: RwLock::new(HashMap::new()),
            log: None,
        }
    }

    /// Appends finished transcripts, one JSON object per line, to `path`.
    pub fn with_log(mut self, path: &Path) -> std::io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        self.log = Some(Mutex::new(file));
        Ok(self)
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Live>>, ApiError> {
        self.sessions
            .read()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "session_not_found", format!("no session `{id}`")))
    }

    fn log_if_finished(&self, live: &mut Live) {
        if live.logged || !live.session.is_finished() {
            return;
        }
        live.logged = true;
        let Some(log) = &self.log else {
            return;
        };
        let mut line = serde_json::to_vec(live.session.transcript()).expect("transcript serializes");
        line.push(b'\n');
        let mut file = log.lock().expect("log lock");
        if let Err(e) = file.write_all(&line).and_then(|_| file.flush()) {
            tracing::error!(error = %e, "could not append transcript");
        }
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/answer", post(submit_answer))
        .route("/api/tables", get(list_tables))
        .with_state(state)
}

/// Per-session overrides of the server defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverride {
    pub k: Option<usize>,
    pub detector: Option<DetectorConfig>,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub question: String,
    pub table_id: String,
    #[serde(default)]
    pub config: Option<ConfigOverride>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnswerRequest {
    pub answer: String,
}

#[derive(Debug, Serialize)]
pub struct QuestionView {
    pub text: String,
    pub slot: String,
    pub value: String,
    pub rule: String,
}

#[derive(Debug, Serialize)]
pub struct FinalView {
    pub sql: String,
    pub query: SqlQuery,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SessionView {
    pub session_id: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub question: Option<QuestionView>,
    pub partial_sql: String,
    #[serde(rename = "final", skip_serializing_if = "Option::is_none")]
    pub final_result: Option<FinalView>,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcript: Option<Transcript>,
}

fn view(id: &str, live: &Live, store: &TableStore) -> SessionView {
    let s = &live.session;
    let question = s.pending_question().map(|q| QuestionView {
        text: q.text.clone(),
        slot: q.slot.to_string(),
        value: q.value.to_string(),
        rule: q.rule.clone(),
    });
    let final_result = s.result().map(|q| {
        let (columns, rows, error) = match execute(q, store) {
            Ok(rs) => (rs.columns, rs.rows, None),
            Err(e) => (Vec::new(), Vec::new(), Some(e.to_string())),
        };
        FinalView {
            sql: render_sql(q),
            query: q.clone(),
            columns,
            rows,
            error,
        }
    });
    SessionView {
        session_id: id.to_string(),
        status: if s.is_finished() { "done" } else { "asking" },
        question,
        partial_sql: s.partial_query().render(std::slice::from_ref(&s.table().id)),
        final_result,
        created_at: live.created_at,
        updated_at: live.updated_at,
        transcript: None,
    }
}

async fn create_session(
    State(state): State<Arc<AppState>>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let Json(req) = body?;
    if req.question.trim().is_empty() {
        return Err(ApiError::validation("question must not be empty"));
    }
    let table = state.tables.get(&req.table_id).cloned().ok_or_else(|| {
        ApiError::new(StatusCode::NOT_FOUND, "table_not_found", format!("no table `{}`", req.table_id))
    })?;
    let mut config = state.defaults;
    if let Some(o) = req.config {
        config.k = o.k.unwrap_or(config.k);
        config.detector = o.detector.unwrap_or(config.detector);
        config.mode = o.mode.unwrap_or(config.mode);
        config.seed = o.seed.unwrap_or(config.seed);
    }
    config.detector.validate().map_err(|e| ApiError::validation(e.to_string()))?;

    let id = uuid::Uuid::new_v4().to_string();
    // the parser sees the question as the example id, so a question always
    // gets the same perturbation seeds and scripted entries
    let mut session = Session::new(
        state.parser.clone(),
        state.nlg.clone(),
        table,
        &req.question,
        &req.question,
        config,
    );
    session.advance().map_err(ApiError::agent)?;
    let now = Utc::now();
    let mut live = Live {
        session,
        created_at: now,
        updated_at: now,
        logged: false,
    };
    state.log_if_finished(&mut live);
    let out = view(&id, &live, &state.store);
    state
        .sessions
        .write()
        .expect("session map lock")
        .insert(id, Arc::new(Mutex::new(live)));
    Ok((StatusCode::CREATED, Json(out)))
}

async fn submit_answer(
    State(state): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<AnswerRequest>, JsonRejection>,
) -> Result<Json<SessionView>, ApiError> {
    let Json(req) = body?;
    let answer = match req.answer.as_str() {
        "yes" => Feedback::Yes,
        "no" => Feedback::No,
        other => return Err(ApiError::validation(format!("answer must be yes or no, got `{other}`"))),
    };
    let handle = state.session(&id)?;
    let mut live = handle.lock().expect("session lock");
    if live.session.is_finished() {
        return Err(ApiError::new(StatusCode::CONFLICT, "session_closed", "the session is finished"));
    }
    live.session.respond(answer).map_err(ApiError::agent)?;
    live.session.advance().map_err(ApiError::agent)?;
    live.updated_at = Utc::now();
    state.log_if_finished(&mut live);
    Ok(Json(view(&id, &live, &state.store)))
}

async fn get_session(
    State(state): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<SessionView>, ApiError> {
    let handle = state.session(&id)?;
    let live = handle.lock().expect("session lock");
    let mut out = view(&id, &live, &state.store);
    out.transcript = Some(live.session.transcript().clone());
    Ok(Json(out))
}

#[derive(Debug, Deserialize)]
struct TablesQuery {
    rows: Option<usize>,
}

async fn list_tables(
    State(state): State<Arc<AppState>>,
    query: Result<Query<TablesQuery>, axum::extract::rejection::QueryRejection>,
) -> Result<Json<Vec<Table>>, ApiError> {
    let Query(q) = query.map_err(|e| ApiError::validation(e.body_text()))?;
    let n = q.rows.unwrap_or(DEFAULT_PREVIEW_ROWS);
    Ok(Json(state.store.iter().map(|t| t.preview(n)).collect()))
}
