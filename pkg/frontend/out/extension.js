"use strict";
var __createBinding = (this && this.__createBinding) || (Object.create ? (function(o, m, k, k2) {
    if (k2 === undefined) k2 = k;
    var desc = Object.getOwnPropertyDescriptor(m, k);
    if (!desc || ("get" in desc ? !m.__esModule : desc.writable || desc.configurable)) {
      desc = { enumerable: true, get: function() { return m[k]; } };
    }
    Object.defineProperty(o, k2, desc);
}) : (function(o, m, k, k2) {
    if (k2 === undefined) k2 = k;
    o[k2] = m[k];
}));
var __setModuleDefault = (this && this.__setModuleDefault) || (Object.create ? (function(o, v) {
    Object.defineProperty(o, "default", { enumerable: true, value: v });
}) : function(o, v) {
    o["default"] = v;
});
var __importStar = (this && this.__importStar) || (function () {
    var ownKeys = function(o) {
        ownKeys = Object.getOwnPropertyNames || function (o) {
            var ar = [];
            for (var k in o) if (Object.prototype.hasOwnProperty.call(o, k)) ar[ar.length] = k;
            return ar;
        };
        return ownKeys(o);
    };
    return function (mod) {
        if (mod && mod.__esModule) return mod;
        var result = {};
        if (mod != null) for (var k = ownKeys(mod), i = 0; i < k.length; i++) if (k[i] !== "default") __createBinding(result, mod, k[i]);
        __setModuleDefault(result, mod);
        return result;
    };
})();
Object.defineProperty(exports, "__esModule", { value: true });
exports.activate = activate;
exports.deactivate = deactivate;
// Thin editor client: every diagnostic and edit comes from the ezasp
// language server; this file only wires the server into VS Code.
const fs = __importStar(require("fs"));
const vscode = __importStar(require("vscode"));
const node_1 = require("vscode-languageclient/node");
const settings_1 = require("./settings");
const REORDER_SERVER_COMMAND = "ezasp.reorder";
const INIT_CONFIG_SERVER_COMMAND = "ezasp.initConfig";
let client;
function sendServerCommand(command, args) {
    if (client === undefined) {
        vscode.window.showErrorMessage(settings_1.MISSING_SERVER_MESSAGE);
        return;
    }
    const params = { command, arguments: args };
    client.sendRequest(node_1.ExecuteCommandRequest.type, params);
}
function reorderProgram() {
    const editor = vscode.window.activeTextEditor;
    if (editor === undefined || editor.document.languageId !== "asp") {
        vscode.window.showInformationMessage("Open an ASP (.lp) file to reorder it.");
        return;
    }
    sendServerCommand(REORDER_SERVER_COMMAND, [editor.document.uri.toString()]);
}
function generateConfig() {
    const editor = vscode.window.activeTextEditor;
    const folder = editor !== undefined
        ? vscode.workspace.getWorkspaceFolder(editor.document.uri)
        : vscode.workspace.workspaceFolders?.[0];
    const target = folder?.uri.fsPath;
    if (target === undefined) {
        vscode.window.showInformationMessage("Open a folder to generate ezasp.json in.");
        return;
    }
    sendServerCommand(INIT_CONFIG_SERVER_COMMAND, [target]);
}
async function activate(context) {
    // Commands are registered up front so the extension stays loaded and
    // informative even when the server binary is missing.
    context.subscriptions.push(vscode.commands.registerCommand("ezasp.reorderProgram", reorderProgram), vscode.commands.registerCommand("ezasp.generateConfig", generateConfig));
    const settings = (0, settings_1.readSettings)((key) => vscode.workspace.getConfiguration().get(key));
    const server = (0, settings_1.resolveServerCommand)(settings, fs.existsSync);
    if (server === undefined) {
        vscode.window.showErrorMessage(settings_1.MISSING_SERVER_MESSAGE);
        return;
    }
    const serverOptions = {
        run: { command: server.command, args: server.args },
        debug: { command: server.command, args: server.args },
    };
    const clientOptions = {
        documentSelector: [
            { scheme: "file", language: "asp" },
            { scheme: "untitled", language: "asp" },
        ],
    };
    client = new node_1.LanguageClient("ezasp", "EZASP Language Server", serverOptions, clientOptions);
    try {
        await client.start();
        await client.setTrace(node_1.Trace.fromString(settings.trace));
        context.subscriptions.push(client);
    }
    catch (err) {
        client = undefined;
        vscode.window.showErrorMessage(`${settings_1.MISSING_SERVER_MESSAGE} (${err})`);
    }
}
function deactivate() {
    const active = client;
    client = undefined;
    return active?.stop();
}
//# sourceMappingURL=extension.js.map